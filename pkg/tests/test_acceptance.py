"""Acceptance suite: scaled-down qualitative reproductions plus oracle checks.

The behavioral criteria run the real experiment pipeline at desk scale
(population 128, dimensionality 20, 5000 generations, 10 replicates).
The exploitation-ordering grid alone runs 10,000 generations: pilot runs
put lexicase's first satisfactory solution near generation 7000 at this
population-to-dimensionality ratio, so the 5000-generation default would
censor the quantity that grid exists to compare.

Sharing-distance reading per grid (the distance normalization flag
exists because both readings of sigma are defensible):

* contradictory-objectives grid: raw distances, under which same-front
  sharing penalizes clone piles and nondominated sorting retains niches;
* valley-crossing grid: diameter-normalized distances, under which
  sharing pressure is broad enough to push lineages through valleys.

Each criterion prints one PASS/FAIL line (run with ``pytest -s`` to see
them as they complete, or ``-rA`` for a summary).
"""

import json
import time
from itertools import product
from pathlib import Path

import numpy as np
import pytest

from evodiags import (
    DiagnosticKind,
    NoveltyParams,
    Population,
    SchemeKind,
    bonferroni,
    contradictory_objectives,
    exploitation_rate,
    kruskal_wallis,
    multipath_exploration,
    novelty_select,
    ordered_exploitation,
    read_records_csv,
    run_replicate,
    sawtooth,
    stochastic_remainder,
    tournament_select,
    wilcoxon_rank_sum,
    write_records_csv,
)
from evodiags.cli import ExperimentConfig, replicate_filename, run_experiment

from oracles import (
    SAWTOOTH_PEAKS,
    oracle_contradictory_objectives,
    oracle_exploitation_rate,
    oracle_multipath_exploration,
    oracle_ordered_exploitation,
    oracle_sawtooth,
)

POP_SIZE = 128
DIM = 20
GENERATIONS = 5_000
EXPLOIT_GENERATIONS = 10_000
REPLICATES = 10
BASE_SEED = 2023
ALPHA = 0.05

ALL_SCHEMES = [kind.value for kind in SchemeKind]


def report(number: int, name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {number} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {number} {name}: {detail}"


def run_grid(tmp_path_factory, label: str, **overrides) -> Path:
    values = dict(
        replicates=REPLICATES, base_seed=BASE_SEED, pop_size=POP_SIZE,
        generations=GENERATIONS, dim=DIM, stride=GENERATIONS,
        workers=0, include_archive=True)
    values.update(overrides)
    out = tmp_path_factory.mktemp(label)
    config = ExperimentConfig(output_dir=str(out), **values)
    assert run_experiment(config) == 0
    return out


def final_metric(out: Path, diagnostic: str, scheme: str, metric: str) -> list:
    values = []
    for rep in range(REPLICATES):
        records = read_records_csv(out / replicate_filename(diagnostic, scheme, rep))
        values.append(getattr(records[-1], metric))
    return values


def best_ever_performance(out: Path, diagnostic: str, scheme: str) -> list[float]:
    values = []
    for rep in range(REPLICATES):
        records = read_records_csv(out / replicate_filename(diagnostic, scheme, rep))
        values.append(max(r.best_performance for r in records))
    return values


def satisfactory_generations(out: Path, diagnostic: str, scheme: str,
                             censor: int) -> list[int]:
    manifest = json.loads((out / "manifest.json").read_text())
    by_key = {(e["diagnostic"], e["scheme"], e["replicate"]):
              e["satisfactory_generation"] for e in manifest["replicates"]}
    return [censor if by_key[(diagnostic, scheme, rep)] is None
            else by_key[(diagnostic, scheme, rep)] for rep in range(REPLICATES)]


@pytest.fixture(scope="module")
def exploit_grid(tmp_path_factory):
    return run_grid(
        tmp_path_factory, "exploit",
        diagnostics=["exploitation-rate", "ordered-exploitation"],
        schemes=["truncation", "tournament", "lexicase"],
        generations=EXPLOIT_GENERATIONS, stride=EXPLOIT_GENERATIONS)


@pytest.fixture(scope="module")
def contradictory_grid(tmp_path_factory):
    return run_grid(
        tmp_path_factory, "contradictory",
        diagnostics=["contradictory-objectives"],
        schemes=ALL_SCHEMES, normalize_sharing=False)


@pytest.fixture(scope="module")
def valley_grid(tmp_path_factory):
    return run_grid(
        tmp_path_factory, "valley",
        diagnostics=["valley-crossing"],
        schemes=ALL_SCHEMES, normalize_sharing=True, stride=1)


# ---------------------------------------------------------------------------
# 1. Exploitation ordering
# ---------------------------------------------------------------------------


def test_criterion_1_exploitation_ordering(exploit_grid):
    censor = EXPLOIT_GENERATIONS + 1
    ok = True
    details = []
    for diagnostic in ("exploitation-rate", "ordered-exploitation"):
        gens = {scheme: satisfactory_generations(exploit_grid, diagnostic,
                                                 scheme, censor)
                for scheme in ("truncation", "tournament", "lexicase")}
        for scheme, values in gens.items():
            reached = sum(v <= EXPLOIT_GENERATIONS for v in values)
            ok &= reached >= 9
            details.append(f"{diagnostic}/{scheme} reached {reached}/10")
        medians = {s: float(np.median(v)) for s, v in gens.items()}
        ok &= medians["truncation"] < medians["tournament"] < medians["lexicase"]
        _, p_tt = wilcoxon_rank_sum(gens["truncation"], gens["tournament"],
                                    alternative="less")
        _, p_tl = wilcoxon_rank_sum(gens["tournament"], gens["lexicase"],
                                    alternative="less")
        ok &= p_tt < ALPHA and p_tl < ALPHA
        details.append(
            f"{diagnostic} medians {medians['truncation']:.0f}<"
            f"{medians['tournament']:.0f}<{medians['lexicase']:.0f} "
            f"p={p_tt:.2g}/{p_tl:.2g}")
    report(1, "exploitation-ordering", ok, "; ".join(details))


# ---------------------------------------------------------------------------
# 2. Contradictory-objectives collapse and coverage ordering
# ---------------------------------------------------------------------------


def test_criterion_2_contradictory_collapse_and_ordering(contradictory_grid):
    diag = "contradictory-objectives"
    ok = True
    details = []
    for scheme in ("truncation", "tournament"):
        coverage = final_metric(contradictory_grid, diag, scheme,
                                "activation_gene_coverage")
        collapsed = sum(c == 1 for c in coverage)
        ok &= collapsed >= 9
        details.append(f"{scheme} collapsed {collapsed}/10")
    sat = {scheme: final_metric(contradictory_grid, diag, scheme,
                                "satisfactory_trait_coverage")
           for scheme in ("nsga", "lexicase", "sharing-phenotypic")}
    _, p_nl = wilcoxon_rank_sum(sat["nsga"], sat["lexicase"], alternative="greater")
    _, p_ls = wilcoxon_rank_sum(sat["lexicase"], sat["sharing-phenotypic"],
                                alternative="greater")
    ok &= p_nl < ALPHA and p_ls < ALPHA
    details.append(
        f"sat medians nsga={np.median(sat['nsga']):.0f} "
        f"lexicase={np.median(sat['lexicase']):.0f} "
        f"sharing-phenotypic={np.median(sat['sharing-phenotypic']):.0f} "
        f"p={p_nl:.2g}/{p_ls:.2g}")
    report(2, "contradictory-objectives-collapse", ok, "; ".join(details))


# ---------------------------------------------------------------------------
# 3. Novelty extremes
# ---------------------------------------------------------------------------


def test_criterion_3_novelty_extremes(contradictory_grid):
    diag = "contradictory-objectives"
    ok = True
    details = []
    novelty_sat = final_metric(contradictory_grid, diag, "novelty",
                               "satisfactory_trait_coverage")
    ok &= all(v == 0 for v in novelty_sat)
    details.append(f"novelty satisfactory traits {sorted(set(novelty_sat))}")
    novelty_cov = final_metric(contradictory_grid, diag, "novelty",
                               "activation_gene_coverage")
    details.append(f"novelty coverage median {np.median(novelty_cov):.0f}")
    for scheme in ALL_SCHEMES:
        if scheme == "novelty":
            continue
        other = final_metric(contradictory_grid, diag, scheme,
                             "activation_gene_coverage")
        _, p = wilcoxon_rank_sum(novelty_cov, other, alternative="greater")
        ok &= p < ALPHA
        if p >= ALPHA:
            details.append(f"vs {scheme} p={p:.3g} (median {np.median(other):.0f})")
    report(3, "novelty-extremes", ok, "; ".join(details))


# ---------------------------------------------------------------------------
# 4. Valley crossing
# ---------------------------------------------------------------------------


def test_criterion_4_valley_crossing(valley_grid):
    diag = "valley-crossing"
    perf = {scheme: best_ever_performance(valley_grid, diag, scheme)
            for scheme in ALL_SCHEMES}
    ok = True
    details = [
        "best-ever medians " + " ".join(
            f"{s}={np.median(v):.1f}" for s, v in sorted(perf.items()))]
    for sharing in ("sharing-genotypic", "sharing-phenotypic"):
        for other in ALL_SCHEMES:
            if other in ("sharing-genotypic", "sharing-phenotypic"):
                continue
            _, p = wilcoxon_rank_sum(perf[sharing], perf[other],
                                     alternative="greater")
            ok &= p < ALPHA
            if p >= ALPHA:
                details.append(f"{sharing} vs {other} p={p:.3g}")
    _, p_lr = wilcoxon_rank_sum(perf["lexicase"], perf["random"])
    ok &= p_lr > ALPHA
    details.append(f"lexicase vs random p={p_lr:.3g}")
    report(4, "valley-crossing", ok, "; ".join(details))


# ---------------------------------------------------------------------------
# 5. Sawtooth correctness
# ---------------------------------------------------------------------------


def test_criterion_5_sawtooth_correctness():
    ok = all(sawtooth(p) == p for p in SAWTOOTH_PEAKS)
    grid = np.linspace(0.0, 100.0, 10_001)
    out = sawtooth(grid)
    expected = np.array([oracle_sawtooth(v) for v in grid])
    ok &= np.array_equal(out, expected)
    ok &= bool(np.all(out <= grid))
    equality = (grid <= 8.0) | np.isin(grid, SAWTOOTH_PEAKS)
    ok &= np.array_equal(out == grid, equality)
    report(5, "sawtooth-correctness", ok,
           f"14 peak fixed points, {grid.size}-point grid bit-exact vs oracle")


# ---------------------------------------------------------------------------
# 6. Diagnostic oracles
# ---------------------------------------------------------------------------


def test_criterion_6_diagnostic_oracles():
    mismatches = 0
    cases = 0
    for combo in product([0.0, 1.0, 2.0, 3.0], repeat=5):
        g = np.asarray(combo)
        cases += 4
        mismatches += list(exploitation_rate(g)) != oracle_exploitation_rate(combo)
        mismatches += list(ordered_exploitation(g)) != oracle_ordered_exploitation(combo)
        traits, act = contradictory_objectives(g)
        mismatches += (list(traits), act) != oracle_contradictory_objectives(combo)
        traits, act = multipath_exploration(g)
        mismatches += (list(traits), act) != oracle_multipath_exploration(combo)
    report(6, "diagnostic-oracles", mismatches == 0,
           f"{cases} enumerated evaluations, {mismatches} mismatches")


# ---------------------------------------------------------------------------
# 7. Selection distributions
# ---------------------------------------------------------------------------


def test_criterion_7_selection_distributions():
    ok = True
    details = []
    # Stochastic remainder: weights [3, 1], two slots per draw. Index 0
    # always keeps its floor slot; the leftover slot is an even coin, so
    # the count of index-0 picks over 10**4 draws is 10**4 + Bin(10**4, .5).
    rng = np.random.default_rng(0)
    zero_picks = 0
    for _ in range(10_000):
        zero_picks += int(np.sum(stochastic_remainder(
            np.array([3.0, 1.0]), 2, rng) == 0))
    sd = np.sqrt(10_000 * 0.25)
    ok &= abs(zero_picks - 15_000) <= 3 * sd
    details.append(f"remainder picks {zero_picks} (15000 +/- {3 * sd:.0f})")

    pheno = np.array([[0.0], [100.0]])
    pop = Population(pheno.copy(), pheno.copy(), pheno.sum(axis=1))
    idx = tournament_select(pop, 2, 10_000, np.random.default_rng(1))
    rate = float(np.mean(idx == 1))
    ok &= abs(rate - 0.75) <= 0.02
    details.append(f"tournament-2 better-pick rate {rate:.3f}")

    # Size-2 novelty tournaments on scores {0, 50}: member 1 sits far from
    # the archive point that member 0 duplicates.
    params = NoveltyParams(k=1, pmin=10**9, save_period=10**9)
    params.archive.append(np.array([0.0, 0.0]))
    pheno = np.array([[0.0, 0.0], [30.0, 40.0]])
    pop = Population(pheno.copy(), pheno.copy(), pheno.sum(axis=1))
    idx = novelty_select(pop, params, 10_000, np.random.default_rng(2))
    nov_rate = float(np.mean(idx == 1))
    ok &= abs(nov_rate - 0.75) <= 0.02
    details.append(f"novelty-2 better-pick rate {nov_rate:.3f}")
    report(7, "selection-distributions", ok, "; ".join(details))


# ---------------------------------------------------------------------------
# 8. Stats oracle
# ---------------------------------------------------------------------------


def test_criterion_8_stats_oracle():
    import scipy.stats
    u, p_exact = wilcoxon_rank_sum([1, 2, 3], [4, 5, 6])
    ok = u == 0.0 and abs(p_exact - 0.1) < 1e-12
    h, p_kw = kruskal_wallis([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    ok &= abs(h - 7.2) < 1e-12
    ok &= abs(p_kw - scipy.stats.chi2.sf(7.2, df=2)) < 1e-3
    ok &= bonferroni([0.6, 0.9]) == [1.0, 1.0]
    report(8, "stats-oracle", ok,
           f"rank-sum p={p_exact}, H={h}, KW p={p_kw:.4f}, capped bonferroni")


# ---------------------------------------------------------------------------
# 9. Determinism and the smoke grid
# ---------------------------------------------------------------------------


def test_criterion_9_determinism_and_smoke_grid(tmp_path_factory):
    out = tmp_path_factory.mktemp("smoke")
    config = ExperimentConfig(
        diagnostics=[k.value for k in DiagnosticKind],
        schemes=ALL_SCHEMES,
        replicates=1, base_seed=99, output_dir=str(out),
        pop_size=32, generations=200, dim=10, stride=20, workers=0)
    started = time.monotonic()
    assert run_experiment(config) == 0
    elapsed = time.monotonic() - started
    files = sorted(out.glob("*.csv"))
    ok = len(files) == 64 and elapsed < 300.0

    # Rerunning a config with the same seed must reproduce files byte for byte.
    rerun_dir = tmp_path_factory.mktemp("smoke-rerun")
    identical = True
    for diagnostic, scheme in (("exploitation-rate", "truncation"),
                               ("contradictory-objectives", "novelty"),
                               ("multipath-valleys", "nsga")):
        rep_config = config.replicate_config(diagnostic, scheme, 0)
        result = run_replicate(rep_config)
        again = rerun_dir / replicate_filename(diagnostic, scheme, 0)
        write_records_csv(again, result.records)
        original = out / replicate_filename(diagnostic, scheme, 0)
        identical &= original.read_bytes() == again.read_bytes()
    ok &= identical
    report(9, "determinism-and-smoke-grid", ok,
           f"64 treatments in {elapsed:.0f}s, spot reruns byte-identical={identical}")
