"""The eight genotype-to-phenotype translation functions.

Four base translations each isolate one search-space character:

* ``exploitation-rate``: genes copy straight into traits, giving D
  independent smooth gradients.
* ``ordered-exploitation``: only the leading non-increasing run of genes
  ("active region") is expressed; everything after the first rise is 0.
* ``contradictory-objectives``: only the single highest gene (the
  "activation gene") is expressed, creating D mutually exclusive optima.
* ``multipath-exploration``: the non-increasing run starting at the
  activation gene is expressed, creating D pathways of unequal length.

The four valley variants apply the same translations and then pass every
would-be trait through a sawtooth transform whose peaks sit at
8, 9, 11, 14, ... 99 with linearly descending, ever-wider valleys
between them. Crossing a valley requires accepting worse trait values
before recovering them at the next peak.

All translations are pure and operate row-wise on (N, D) blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .core import Individual, Population, UPPER_BOUND


class DiagnosticKind(str, Enum):
    """Canonical diagnostic names used in configs, CLI flags, and filenames."""

    EXPLOITATION_RATE = "exploitation-rate"
    ORDERED_EXPLOITATION = "ordered-exploitation"
    CONTRADICTORY_OBJECTIVES = "contradictory-objectives"
    MULTIPATH_EXPLORATION = "multipath-exploration"
    VALLEY_CROSSING = "valley-crossing"
    ORDERED_EXPLOITATION_VALLEYS = "ordered-exploitation-valleys"
    CONTRADICTORY_OBJECTIVES_VALLEYS = "contradictory-objectives-valleys"
    MULTIPATH_VALLEYS = "multipath-valleys"


_VALLEY_KINDS = {
    DiagnosticKind.VALLEY_CROSSING,
    DiagnosticKind.ORDERED_EXPLOITATION_VALLEYS,
    DiagnosticKind.CONTRADICTORY_OBJECTIVES_VALLEYS,
    DiagnosticKind.MULTIPATH_VALLEYS,
}

_ACTIVATION_KINDS = {
    DiagnosticKind.CONTRADICTORY_OBJECTIVES,
    DiagnosticKind.MULTIPATH_EXPLORATION,
    DiagnosticKind.CONTRADICTORY_OBJECTIVES_VALLEYS,
    DiagnosticKind.MULTIPATH_VALLEYS,
}

_BASE_OF_VALLEY = {
    DiagnosticKind.VALLEY_CROSSING: DiagnosticKind.EXPLOITATION_RATE,
    DiagnosticKind.ORDERED_EXPLOITATION_VALLEYS: DiagnosticKind.ORDERED_EXPLOITATION,
    DiagnosticKind.CONTRADICTORY_OBJECTIVES_VALLEYS: DiagnosticKind.CONTRADICTORY_OBJECTIVES,
    DiagnosticKind.MULTIPATH_VALLEYS: DiagnosticKind.MULTIPATH_EXPLORATION,
}


@dataclass(frozen=True)
class SawtoothParams:
    """Peak schedule for the valley transform.

    Peak k sits at ``v_initial + k (k + 1) / 2``, so the k-th valley is k
    units wide; with the defaults that is exactly
    8, 9, 11, 14, 18, 23, 29, 36, 44, 53, 63, 74, 86, 99.
    """

    v_initial: float = 8.0
    upper: float = UPPER_BOUND
    peaks: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.v_initial <= 0.0 or self.v_initial > self.upper:
            raise ValueError(
                f"v_initial must lie in (0, upper], got {self.v_initial}")
        peaks = []
        k = 0
        while True:
            peak = self.v_initial + k * (k + 1) / 2.0
            if peak > self.upper:
                break
            peaks.append(peak)
            k += 1
        arr = np.asarray(peaks, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "peaks", arr)


_DEFAULT_SAWTOOTH = SawtoothParams()
assert list(_DEFAULT_SAWTOOTH.peaks) == [
    8.0, 9.0, 11.0, 14.0, 18.0, 23.0, 29.0, 36.0, 44.0, 53.0, 63.0, 74.0, 86.0, 99.0]


@dataclass(frozen=True)
class DiagnosticSpec:
    """Which translation to apply, plus sawtooth parameters for valley kinds."""

    kind: DiagnosticKind
    sawtooth: Optional[SawtoothParams] = None

    def __post_init__(self) -> None:
        kind = DiagnosticKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in _VALLEY_KINDS:
            if self.sawtooth is None:
                object.__setattr__(self, "sawtooth", _DEFAULT_SAWTOOTH)
        elif self.sawtooth is not None:
            raise ValueError(f"{kind.value} does not take sawtooth parameters")

    @property
    def is_valley(self) -> bool:
        return self.kind in _VALLEY_KINDS

    @property
    def has_activation(self) -> bool:
        return self.kind in _ACTIVATION_KINDS

    @property
    def base_kind(self) -> DiagnosticKind:
        return _BASE_OF_VALLEY.get(self.kind, self.kind)


def all_diagnostic_names() -> list[str]:
    return [kind.value for kind in DiagnosticKind]


# ---------------------------------------------------------------------------
# Base translations
# ---------------------------------------------------------------------------


def exploitation_rate(genotype: np.ndarray) -> np.ndarray:
    """Copy every gene directly into the corresponding trait."""
    return np.array(genotype, dtype=np.float64, copy=True)


def ordered_exploitation(genotype: np.ndarray) -> np.ndarray:
    """Express the leading non-increasing run of genes; later traits are 0.

    The first gene is always active, each following gene stays active
    while it does not exceed its predecessor, and the first rising gene
    ends the active region for the rest of the genome.
    """
    single, rows = _as_rows(genotype)
    traits = _ordered_exploitation_rows(rows)
    return traits[0] if single else traits


def contradictory_objectives(genotype: np.ndarray) -> tuple[np.ndarray, int]:
    """Express only the highest gene; ties go to the lower index.

    Returns the phenotype and the activation gene index.
    """
    single, rows = _as_rows(genotype)
    traits, activation = _contradictory_objectives_rows(rows)
    if single:
        return traits[0], int(activation[0])
    return traits, activation


def multipath_exploration(genotype: np.ndarray) -> tuple[np.ndarray, int]:
    """Express the non-increasing run that starts at the highest gene.

    The highest gene (ties to the lower index) is the activation gene and
    opens the active region; the region closes just before the first gene
    that rises above its predecessor. Returns phenotype and activation
    index.
    """
    single, rows = _as_rows(genotype)
    traits, activation = _multipath_rows(rows)
    if single:
        return traits[0], int(activation[0])
    return traits, activation


def _as_rows(genotype: np.ndarray) -> tuple[bool, np.ndarray]:
    arr = np.asarray(genotype, dtype=np.float64)
    if arr.ndim == 1:
        return True, arr[np.newaxis, :]
    return False, arr


def _ordered_exploitation_rows(rows: np.ndarray) -> np.ndarray:
    n, dim = rows.shape
    traits = rows.copy()
    if dim > 1:
        rising = rows[:, 1:] > rows[:, :-1]
        # Active length = position of the first rise + 1 (whole genome if none).
        has_rise = rising.any(axis=1)
        first_rise = rising.argmax(axis=1)
        active_len = np.where(has_rise, first_rise + 1, dim)
        traits[np.arange(dim) >= active_len[:, np.newaxis]] = 0.0
    return traits


def _contradictory_objectives_rows(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = rows.shape[0]
    activation = rows.argmax(axis=1)
    traits = np.zeros_like(rows)
    sel = np.arange(n)
    traits[sel, activation] = rows[sel, activation]
    return traits, activation


def _multipath_rows(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n, dim = rows.shape
    activation = rows.argmax(axis=1)
    cols = np.arange(dim)
    if dim > 1:
        rising = np.zeros_like(rows, dtype=bool)
        rising[:, 1:] = rows[:, 1:] > rows[:, :-1]
        rise_after_start = rising & (cols > activation[:, np.newaxis])
        has_end = rise_after_start.any(axis=1)
        region_end = np.where(has_end, rise_after_start.argmax(axis=1), dim)
    else:
        region_end = np.full(n, dim)
    active = (cols >= activation[:, np.newaxis]) & (cols < region_end[:, np.newaxis])
    traits = np.where(active, rows, 0.0)
    return traits, activation


# ---------------------------------------------------------------------------
# Sawtooth transform
# ---------------------------------------------------------------------------


def sawtooth(value, params: SawtoothParams = _DEFAULT_SAWTOOTH):
    """Map a trait value through the peaked valley profile.

    Values at or below ``v_initial`` pass through unchanged; every peak is
    a fixed point; between peaks the output descends from the last peak
    with slope -1 and snaps back to the input value at the next peak. Past
    the final peak the last descent simply continues to the domain bound.
    Accepts scalars or arrays; inputs must lie in [0, upper].
    """
    v = np.asarray(value, dtype=np.float64)
    if np.any(v < 0.0) or np.any(v > params.upper):
        raise ValueError(f"sawtooth input must lie in [0, {params.upper}]")
    out = _sawtooth_unchecked(v, params)
    if np.isscalar(value) or np.ndim(value) == 0:
        return float(out)
    return out


def _sawtooth_unchecked(v: np.ndarray, params: SawtoothParams) -> np.ndarray:
    peaks = params.peaks
    # Index of the last peak at or below v; v <= v_initial is the identity region.
    idx = np.searchsorted(peaks, v, side="right") - 1
    below = idx < 0
    anchor = peaks[np.where(below, 0, idx)]
    descended = anchor - (v - anchor)
    return np.where(v <= params.v_initial, v, np.where(below, v, descended))


def apply_valleys(traits: np.ndarray, params: SawtoothParams = _DEFAULT_SAWTOOTH) -> np.ndarray:
    """Apply the sawtooth trait-wise; zero (inactive) traits stay zero."""
    return _sawtooth_unchecked(np.asarray(traits, dtype=np.float64), params)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def translate(genotypes: np.ndarray, spec: DiagnosticSpec) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Translate an (N, D) genotype block into traits per ``spec``.

    Returns the (N, D) trait block and, for activation diagnostics, the
    (N,) activation indices (None otherwise). Valley variants run the base
    translation and then the sawtooth; activation genes are determined
    from the raw genes, before the sawtooth is applied.
    """
    rows = np.asarray(genotypes, dtype=np.float64)
    base = _BASE_OF_VALLEY.get(spec.kind, spec.kind)
    activation = None
    if base is DiagnosticKind.EXPLOITATION_RATE:
        traits = rows.copy()
    elif base is DiagnosticKind.ORDERED_EXPLOITATION:
        traits = _ordered_exploitation_rows(rows)
    elif base is DiagnosticKind.CONTRADICTORY_OBJECTIVES:
        traits, activation = _contradictory_objectives_rows(rows)
    else:
        traits, activation = _multipath_rows(rows)
    if spec.is_valley:
        traits = apply_valleys(traits, spec.sawtooth)
    return traits, activation


def evaluate(genotype: np.ndarray, spec: DiagnosticSpec) -> Individual:
    """Evaluate one genotype, caching total fitness and activation gene."""
    traits, activation = translate(genotype[np.newaxis, :], spec)
    return Individual(
        genotype=np.asarray(genotype, dtype=np.float64),
        phenotype=traits[0],
        total_fitness=float(traits[0].sum()),
        activation_gene=int(activation[0]) if activation is not None else None,
    )


def evaluate_population(genotypes: np.ndarray, spec: DiagnosticSpec) -> Population:
    """Evaluate an (N, D) genotype block into a frozen population."""
    traits, activation = translate(genotypes, spec)
    return Population(
        genotypes=genotypes,
        phenotypes=traits,
        total_fitness=traits.sum(axis=1),
        activation_genes=activation,
    )
