"""Tour of the eight search-space diagnostics.

One genotype is pushed through every translation function so the
differences are visible side by side: which genes are expressed, where
the active region sits, and what the sawtooth valleys do to trait
values.

Run with: python demos/diagnostics_tour.py
"""

import numpy as np

from evodiags import DiagnosticKind, DiagnosticSpec, SawtoothParams, evaluate, sawtooth

# A dimensionality-10 genotype with a clear structure: an early
# non-increasing run, a rise at index 3, and the maximum at index 5.
genotype = np.array([62.0, 55.5, 51.0, 80.0, 12.5, 97.1, 88.0, 63.0, 70.0, 9.0])

print("genotype:", np.array2string(genotype, precision=1))
print()
header = f"{'diagnostic':36s} {'activation':>10s}  phenotype"
print(header)
print("-" * len(header))
for kind in DiagnosticKind:
    individual = evaluate(genotype, DiagnosticSpec(kind))
    activation = "-" if individual.activation_gene is None else str(individual.activation_gene)
    traits = np.array2string(individual.phenotype, precision=1, floatmode="fixed")
    print(f"{kind.value:36s} {activation:>10s}  {traits}")

# The sawtooth transform behind the four valley variants: values rise
# untouched to the first peak at 8, then ever-wider valleys descend with
# slope -1 and snap back at the next peak.
params = SawtoothParams()
print("\nsawtooth peaks:", [int(p) for p in params.peaks])
print(f"{'v':>6s} {'sawtooth(v)':>12s}")
for v in (2.0, 8.0, 8.5, 9.0, 10.0, 14.0, 20.0, 36.0, 50.0, 53.0, 75.0, 99.0, 100.0):
    print(f"{v:6.1f} {sawtooth(v, params):12.1f}")
