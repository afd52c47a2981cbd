"""Parent selection schemes.

Every scheme maps an evaluated population to ``n`` parent indices chosen
with replacement. Aggregate schemes (truncation, tournament, fitness
sharing, nondominated sorting) rank on total fitness or shared variants
of it; lexicase treats each trait as a test case; novelty search scores
behavioral distinctness against the population and a growing archive;
random selection is the control.

Distance-based schemes can normalize Euclidean distances by the search
space diameter (``upper_bound * sqrt(D)``) so that ``sigma`` reads as a
fraction of the diameter; the raw-distance reading is available behind
the same flag. Novelty distances are always raw, since the archive
threshold ``pmin`` is calibrated in raw units.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .core import ConfigurationError, Population, UPPER_BOUND


class SchemeKind(str, Enum):
    """Canonical scheme names used in configs, CLI flags, and filenames."""

    TRUNCATION = "truncation"
    TOURNAMENT = "tournament"
    SHARING_GENOTYPIC = "sharing-genotypic"
    SHARING_PHENOTYPIC = "sharing-phenotypic"
    LEXICASE = "lexicase"
    NSGA = "nsga"
    NOVELTY = "novelty"
    RANDOM = "random"


def all_scheme_names() -> list[str]:
    return [kind.value for kind in SchemeKind]


@dataclass
class NoveltyParams:
    """Novelty search configuration plus its mutable archive state.

    The archive is append-only. ``pmin`` adapts over a run: it rises 25%
    whenever more than ``burst_limit`` phenotypes clear it in a single
    generation, and decays 5% after ``decay_window`` consecutive
    generations without a threshold addition. Independently, about one
    random population phenotype per ``save_period`` generations is
    archived regardless of score.
    """

    k: int = 15
    pmin: float = 10.0
    archive: list[np.ndarray] = field(default_factory=list)
    generations_since_add: int = 0
    save_period: int = 200
    burst_limit: int = 4
    raise_factor: float = 1.25
    decay_window: int = 500
    decay_factor: float = 0.95
    tournament_size: int = 2

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ConfigurationError(f"novelty k must be >= 1, got {self.k}")
        if self.pmin <= 0.0:
            raise ConfigurationError(f"pmin must be positive, got {self.pmin}")


@dataclass
class SchemeParams:
    """Per-scheme configuration bundle handed to :func:`select`."""

    scheme: SchemeKind
    tr: int = 8
    ts: int = 8
    sigma: float = 0.3
    alpha: float = 1.0
    normalize_distance: bool = True
    novelty: NoveltyParams = field(default_factory=NoveltyParams)

    def __post_init__(self) -> None:
        self.scheme = SchemeKind(self.scheme)
        if self.tr < 1:
            raise ConfigurationError(f"tr must be >= 1, got {self.tr}")
        if self.ts < 1:
            raise ConfigurationError(f"ts must be >= 1, got {self.ts}")
        if self.sigma < 0.0:
            raise ConfigurationError(f"sigma must be >= 0, got {self.sigma}")
        if self.alpha <= 0.0:
            raise ConfigurationError(f"alpha must be > 0, got {self.alpha}")


@dataclass
class FrontAssignment:
    """Nondominated fronts plus the shared fitness derived from them."""

    fronts: list[np.ndarray]
    shared_fitness: np.ndarray


# ---------------------------------------------------------------------------
# Fitness-ranked schemes
# ---------------------------------------------------------------------------


def truncation_select(
    pop: Population, tr: int, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Keep the top ``tr`` by total fitness; parents split the brood evenly.

    Ties in the sort are settled randomly. Each survivor receives
    ``n // tr`` offspring slots; any remainder is dealt round-robin from
    the best rank down.
    """
    if tr > len(pop):
        raise ConfigurationError(f"tr={tr} exceeds population size {len(pop)}")
    order = _random_tie_sort(pop.total_fitness, rng)
    counts = np.full(tr, n // tr, dtype=np.int64)
    counts[: n % tr] += 1
    return np.repeat(order[:tr], counts)


def tournament_select(
    pop: Population, ts: int, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Hold ``n`` independent size-``ts`` tournaments on total fitness.

    Entrants are sampled uniformly with replacement; the highest total
    fitness wins, ties settled uniformly among the tied entrants.
    """
    return _score_tournaments(pop.total_fitness, ts, n, rng)


def random_select(pop: Population, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draws with replacement; the no-selection-pressure control."""
    return rng.integers(0, len(pop), size=n)


def _random_tie_sort(fitness: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Indices sorted by descending fitness with random tie order."""
    perm = rng.permutation(len(fitness))
    return perm[np.argsort(-fitness[perm], kind="stable")]


def _score_tournaments(
    scores: np.ndarray, size: int, n: int, rng: np.random.Generator
) -> np.ndarray:
    entrants = rng.integers(0, len(scores), size=(n, size))
    vals = scores[entrants]
    is_best = vals == vals.max(axis=1, keepdims=True)
    # Random argmax among tied entrants.
    tiebreak = np.where(is_best, rng.random((n, size)), -1.0)
    return entrants[np.arange(n), tiebreak.argmax(axis=1)]


# ---------------------------------------------------------------------------
# Fitness sharing
# ---------------------------------------------------------------------------


def sharing_kernel(d, sigma: float, alpha: float):
    """Sharing contribution of a neighbor at distance ``d``.

    Returns ``1 - (d / sigma) ** alpha`` for ``d < sigma`` and 0 beyond;
    ``sigma == 0`` disables sharing entirely (kernel is 0 everywhere).
    Accepts scalars or arrays.
    """
    d_arr = np.asarray(d, dtype=np.float64)
    if sigma == 0.0:
        out = np.zeros_like(d_arr)
    else:
        out = np.where(d_arr < sigma, 1.0 - (d_arr / sigma) ** alpha, 0.0)
    if np.isscalar(d) or np.ndim(d) == 0:
        return float(out)
    return out


def pairwise_distances(points: np.ndarray, normalize: bool) -> np.ndarray:
    """Euclidean distance matrix, optionally scaled by the space diameter."""
    dmat = cdist(points, points)
    if normalize:
        dmat = dmat / (UPPER_BOUND * np.sqrt(points.shape[1]))
    return dmat


def niche_counts(
    points: np.ndarray,
    sigma: float,
    alpha: float,
    normalize: bool = True,
    dmat: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Per-row sum of the sharing kernel over all rows (self included).

    The self term contributes 1, so counts are always >= 1; with sharing
    disabled (sigma 0) every count is exactly 1.
    """
    if dmat is None:
        dmat = pairwise_distances(points, normalize)
    return np.maximum(sharing_kernel(dmat, sigma, alpha).sum(axis=1), 1.0)


def niche_count(
    index: int,
    pop: Population,
    metric: str,
    sigma: float,
    alpha: float,
    normalize: bool = True,
) -> float:
    """Niche count of one member under genotypic or phenotypic similarity."""
    points = _metric_points(pop, metric)
    return float(niche_counts(points, sigma, alpha, normalize)[index])


def _metric_points(pop: Population, metric: str) -> np.ndarray:
    if metric == "genotypic":
        return pop.genotypes
    if metric == "phenotypic":
        return pop.phenotypes
    raise ConfigurationError(f"unknown similarity metric {metric!r}")


def fitness_sharing_select(
    pop: Population,
    metric: str,
    sigma: float,
    alpha: float,
    n: int,
    rng: np.random.Generator,
    normalize: bool = True,
) -> np.ndarray:
    """Divide each fitness by its niche count, then stochastic remainder."""
    m = niche_counts(_metric_points(pop, metric), sigma, alpha, normalize)
    return stochastic_remainder(pop.total_fitness / m, n, rng)


def stochastic_remainder(
    weights: np.ndarray, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Stochastic remainder selection with replacement.

    Each index i deterministically receives ``floor(n * w_i / sum w)``
    slots; leftover slots are drawn with replacement in proportion to the
    fractional remainders. Negative weights are clamped to 0; if every
    weight is 0 the draw degrades to uniform random.
    """
    w = np.maximum(np.asarray(weights, dtype=np.float64), 0.0)
    total = w.sum()
    if total <= 0.0:
        return rng.integers(0, len(w), size=n)
    expected = n * w / total
    base = np.floor(expected).astype(np.int64)
    chosen = np.repeat(np.arange(len(w)), base)
    leftover = n - int(base.sum())
    if leftover > 0:
        frac = expected - base
        frac_total = frac.sum()
        if frac_total <= 0.0:
            extra = rng.integers(0, len(w), size=leftover)
        else:
            extra = rng.choice(len(w), size=leftover, p=frac / frac_total)
        chosen = np.concatenate([chosen, extra])
    return chosen


# ---------------------------------------------------------------------------
# Lexicase
# ---------------------------------------------------------------------------


def lexicase_select(pop: Population, n: int, rng: np.random.Generator) -> np.ndarray:
    """Filter candidates through shuffled test cases, one parent at a time.

    Each trait is a test case. For every parent pick, the case order is
    reshuffled and candidates must tie the running best (exact float
    equality) on each case in turn; once one candidate remains (or cases
    run out) a parent is drawn uniformly from the survivors.

    Implementation note: individuals with identical phenotypes pass or
    fail every filter together, and any survivors left after a full pass
    are exact phenotype ties. Filtering therefore runs over the distinct
    phenotype rows, and the winning row's members split the pick
    uniformly; asexual populations carry many clones, which makes this
    markedly cheaper than filtering raw indices.
    """
    pheno = pop.phenotypes
    dim = pheno.shape[1]
    unique_rows, inverse = np.unique(pheno, axis=0, return_inverse=True)
    n_rows = unique_rows.shape[0]
    orders = rng.permuted(np.tile(np.arange(dim), (n, 1)), axis=1)
    # Filter all picks in lockstep: alive[i, r] says row r is still a
    # candidate for pick i. Distinct rows cannot tie on every case, so
    # each pick ends with exactly one row alive.
    alive = np.ones((n, n_rows), dtype=bool)
    if n_rows > 1:
        for j in range(dim):
            vals = unique_rows[:, orders[:, j]].T
            masked = np.where(alive, vals, -np.inf)
            alive = masked == masked.max(axis=1, keepdims=True)
            if alive.sum(axis=1).max() == 1:
                break
    winner_rows = alive.argmax(axis=1)
    # Uniform pick among the clones sharing the winning phenotype.
    members_by_row = np.argsort(inverse, kind="stable")
    class_sizes = np.bincount(inverse, minlength=n_rows)
    offsets = np.concatenate([[0], np.cumsum(class_sizes)])
    draws = rng.random(n)
    slot = np.floor(draws * class_sizes[winner_rows]).astype(np.int64)
    return members_by_row[offsets[winner_rows] + slot]


# ---------------------------------------------------------------------------
# Nondominated sorting
# ---------------------------------------------------------------------------


def dominates(x: np.ndarray, y: np.ndarray) -> bool:
    """True iff x is at least as good everywhere and strictly better somewhere."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("phenotypes must have equal length")
    return bool(np.all(x >= y) and np.any(x > y))


def nondominated_fronts(phenotypes: np.ndarray) -> list[np.ndarray]:
    """Partition row indices into nondominated fronts (front 0 first)."""
    pheno = np.asarray(phenotypes, dtype=np.float64)
    n = pheno.shape[0]
    ge = np.all(pheno[:, np.newaxis, :] >= pheno[np.newaxis, :, :], axis=2)
    gt = np.any(pheno[:, np.newaxis, :] > pheno[np.newaxis, :, :], axis=2)
    dom = ge & gt  # dom[i, j]: i dominates j
    dominator_count = dom.sum(axis=0)
    fronts: list[np.ndarray] = []
    assigned = np.zeros(n, dtype=bool)
    while not assigned.all():
        current = np.flatnonzero((dominator_count == 0) & ~assigned)
        fronts.append(current)
        assigned[current] = True
        dominator_count = dominator_count - dom[current].sum(axis=0)
    return fronts


def nsga_front_assignment(
    phenotypes: np.ndarray,
    sigma: float,
    alpha: float,
    normalize: bool = True,
    front_decay: float = 0.99,
) -> FrontAssignment:
    """Rank by front, then share a per-front dummy fitness within each front.

    Front 0 starts from a dummy fitness equal to the population size; each
    later front starts just below the smallest shared fitness of the front
    before it, preserving strict cross-front ordering. Sharing uses
    phenotypic similarity restricted to same-front members.
    """
    pheno = np.asarray(phenotypes, dtype=np.float64)
    fronts = nondominated_fronts(pheno)
    dmat = pairwise_distances(pheno, normalize)
    shared = np.empty(pheno.shape[0], dtype=np.float64)
    dummy = float(pheno.shape[0])
    for front in fronts:
        sub = dmat[np.ix_(front, front)]
        m = np.maximum(sharing_kernel(sub, sigma, alpha).sum(axis=1), 1.0)
        shared[front] = dummy / m
        dummy = front_decay * shared[front].min()
    return FrontAssignment(fronts=fronts, shared_fitness=shared)


def nsga_select(
    pop: Population,
    sigma: float,
    alpha: float,
    n: int,
    rng: np.random.Generator,
    normalize: bool = True,
) -> np.ndarray:
    """Stochastic remainder over front-ranked, within-front-shared fitness."""
    assignment = nsga_front_assignment(pop.phenotypes, sigma, alpha, normalize)
    return stochastic_remainder(assignment.shared_fitness, n, rng)


# ---------------------------------------------------------------------------
# Novelty search
# ---------------------------------------------------------------------------


def novelty_scores(
    phenotypes: np.ndarray, archive: Sequence[np.ndarray], k: int
) -> np.ndarray:
    """Mean raw Euclidean distance to the k nearest phenotype neighbors.

    The neighbor pool is the current population plus the archive; each
    member is excluded from its own pool exactly once, but other members
    at distance zero still count. Pools smaller than k average over every
    available neighbor; an empty pool scores 0.
    """
    pheno = np.asarray(phenotypes, dtype=np.float64)
    n = pheno.shape[0]
    if len(archive):
        pool = np.vstack([pheno, np.asarray(archive, dtype=np.float64)])
    else:
        pool = pheno
    dists = cdist(pheno, pool)
    dists[np.arange(n), np.arange(n)] = np.inf  # self, excluded once
    available = pool.shape[0] - 1
    if available < 1:
        return np.zeros(n, dtype=np.float64)
    kk = min(k, available)
    nearest = np.partition(dists, kk - 1, axis=1)[:, :kk]
    return nearest.mean(axis=1)


def novelty_select(
    pop: Population,
    params: NoveltyParams,
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Score novelty, update the archive state in place, then run
    size-two tournaments on the scores.

    Archive update order: threshold additions, burst check on ``pmin``,
    stagnation decay of ``pmin``, then the periodic random save.
    """
    scores = novelty_scores(pop.phenotypes, params.archive, params.k)
    novel = np.flatnonzero(scores > params.pmin)
    for idx in novel:
        params.archive.append(pop.phenotypes[idx].copy())
    if novel.size > params.burst_limit:
        params.pmin *= params.raise_factor
    if novel.size > 0:
        params.generations_since_add = 0
    else:
        params.generations_since_add += 1
        if params.generations_since_add >= params.decay_window:
            params.pmin *= params.decay_factor
            params.generations_since_add = 0
    if rng.random() < 1.0 / params.save_period:
        params.archive.append(pop.phenotypes[rng.integers(len(pop))].copy())
    return _score_tournaments(scores, params.tournament_size, n, rng)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def select(
    pop: Population,
    params: SchemeParams,
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Run the configured scheme and return ``n`` parent indices."""
    kind = params.scheme
    if kind is SchemeKind.TRUNCATION:
        return truncation_select(pop, params.tr, n, rng)
    if kind is SchemeKind.TOURNAMENT:
        return tournament_select(pop, params.ts, n, rng)
    if kind is SchemeKind.SHARING_GENOTYPIC:
        return fitness_sharing_select(
            pop, "genotypic", params.sigma, params.alpha, n, rng,
            params.normalize_distance)
    if kind is SchemeKind.SHARING_PHENOTYPIC:
        return fitness_sharing_select(
            pop, "phenotypic", params.sigma, params.alpha, n, rng,
            params.normalize_distance)
    if kind is SchemeKind.LEXICASE:
        return lexicase_select(pop, n, rng)
    if kind is SchemeKind.NSGA:
        return nsga_select(
            pop, params.sigma, params.alpha, n, rng, params.normalize_distance)
    if kind is SchemeKind.NOVELTY:
        return novelty_select(pop, params.novelty, n, rng)
    if kind is SchemeKind.RANDOM:
        return random_select(pop, n, rng)
    raise ConfigurationError(f"unknown selection scheme {kind!r}")


def fresh_scheme_state(params: SchemeParams) -> SchemeParams:
    """Deep copy so one replicate's archive state never leaks into another."""
    return copy.deepcopy(params)
