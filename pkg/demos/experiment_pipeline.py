"""The full experiment pipeline in miniature.

A small diagnostic-by-scheme grid runs to per-replicate CSV files plus a
manifest, and the analyze step compares schemes per diagnostic with a
Kruskal-Wallis omnibus followed by Bonferroni-corrected pairwise
rank-sum tests. The same flow scales to the headline protocol
(8 diagnostics x 8 schemes x 50 replicates at population 512).

Run with: python demos/experiment_pipeline.py
"""

import tempfile
from pathlib import Path

from evodiags.cli import ExperimentConfig, analyze, run_experiment

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "results"
    config = ExperimentConfig(
        diagnostics=["exploitation-rate", "ordered-exploitation"],
        schemes=["truncation", "tournament", "random"],
        replicates=8,
        base_seed=17,
        output_dir=str(out),
        pop_size=32,
        generations=400,
        dim=8,
        stride=100,
    )
    print("running the grid (2 diagnostics x 3 schemes x 8 replicates)...")
    assert run_experiment(config) == 0

    files = sorted(p.name for p in out.glob("*.csv"))
    print(f"\n{len(files)} replicate files, e.g. {files[0]}")

    print("\nanalyze on end-of-run best performance:")
    assert analyze(str(out), metric="best_performance") == 0

    print("\ncomparisons.csv:")
    print((out / "comparisons.csv").read_text())
