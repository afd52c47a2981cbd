"""Genome representation, initialization, and bounded point mutation.

A genotype is a fixed-length vector of floating-point trait values in
[0.0, 100.0]. Populations are stored as dense (N, D) arrays so that
evaluation and variation stay vectorized; ``Individual`` is a lightweight
per-member view used by object-level APIs and tests.

All randomness flows through an explicit ``numpy.random.Generator`` so a
replicate is bit-reproducible from its seed. Evaluation is pure and
consumes no randomness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

LOWER_BOUND: float = 0.0
UPPER_BOUND: float = 100.0
DEFAULT_DIM: int = 100
DEFAULT_POP_SIZE: int = 512


class ConfigurationError(ValueError):
    """Raised when a parameter value violates its documented range."""


@dataclass(frozen=True)
class MutationParams:
    """Per-gene point mutation settings.

    Each gene independently receives, with probability ``per_gene_rate``,
    an additive draw from Normal(0, step_stddev**2). Out-of-range results
    are reflected back across the violated bound.
    """

    per_gene_rate: float = 0.007
    step_stddev: float = 1.0
    lo: float = LOWER_BOUND
    hi: float = UPPER_BOUND

    def __post_init__(self) -> None:
        if not 0.0 <= self.per_gene_rate <= 1.0:
            raise ConfigurationError(
                f"per_gene_rate must be in [0, 1], got {self.per_gene_rate}")
        if self.step_stddev <= 0.0:
            raise ConfigurationError(
                f"step_stddev must be positive, got {self.step_stddev}")
        if self.hi <= self.lo:
            raise ConfigurationError(
                f"mutation bounds require hi > lo, got [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class Individual:
    """One evaluated solution: heritable genotype plus its expressed traits.

    ``total_fitness`` is the sum of phenotype traits. ``activation_gene``
    is set only for diagnostics that define one, else None.
    """

    genotype: np.ndarray
    phenotype: np.ndarray
    total_fitness: float
    activation_gene: Optional[int] = None


class Population:
    """Fixed-size collection of evaluated individuals, stored columnar.

    Arrays are frozen (non-writeable) after construction; derive new
    populations by copying rather than editing in place.
    """

    def __init__(
        self,
        genotypes: np.ndarray,
        phenotypes: np.ndarray,
        total_fitness: np.ndarray,
        activation_genes: Optional[np.ndarray] = None,
    ) -> None:
        genotypes = np.array(genotypes, dtype=np.float64, copy=True)
        phenotypes = np.array(phenotypes, dtype=np.float64, copy=True)
        total_fitness = np.array(total_fitness, dtype=np.float64, copy=True)
        if genotypes.ndim != 2 or phenotypes.shape != genotypes.shape:
            raise ValueError("genotypes and phenotypes must be matching (N, D) arrays")
        if total_fitness.shape != (genotypes.shape[0],):
            raise ValueError("total_fitness must have one entry per member")
        if activation_genes is not None:
            activation_genes = np.array(activation_genes, dtype=np.int64, copy=True)
            if activation_genes.shape != (genotypes.shape[0],):
                raise ValueError("activation_genes must have one entry per member")
            activation_genes.flags.writeable = False
        for arr in (genotypes, phenotypes, total_fitness):
            arr.flags.writeable = False
        self.genotypes = genotypes
        self.phenotypes = phenotypes
        self.total_fitness = total_fitness
        self.activation_genes = activation_genes

    @property
    def size(self) -> int:
        return self.genotypes.shape[0]

    @property
    def dim(self) -> int:
        return self.genotypes.shape[1]

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, index: int) -> Individual:
        activation = None
        if self.activation_genes is not None:
            activation = int(self.activation_genes[index])
        return Individual(
            genotype=self.genotypes[index],
            phenotype=self.phenotypes[index],
            total_fitness=float(self.total_fitness[index]),
            activation_gene=activation,
        )

    @property
    def members(self) -> list[Individual]:
        return [self[i] for i in range(self.size)]


def random_genotype(
    dim: int,
    lo: float,
    hi: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw one genotype with genes independently uniform on [lo, hi).

    Initial populations start far below the gene cap (default range is
    [0, 1)), so early search has to climb the whole scale.
    """
    _check_init_range(dim, lo, hi)
    return rng.uniform(lo, hi, size=dim)


def random_genotypes(
    n: int,
    dim: int,
    lo: float,
    hi: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw an (n, dim) block of genotypes; row-major, so the stream
    matches n successive :func:`random_genotype` calls."""
    _check_init_range(dim, lo, hi)
    if n < 1:
        raise ConfigurationError(f"population size must be >= 1, got {n}")
    return rng.uniform(lo, hi, size=(n, dim))


def _check_init_range(dim: int, lo: float, hi: float) -> None:
    if dim < 1:
        raise ConfigurationError(f"dimensionality must be >= 1, got {dim}")
    if not lo < hi:
        raise ConfigurationError(f"initialization range requires lo < hi, got [{lo}, {hi})")
    if lo < LOWER_BOUND or hi > UPPER_BOUND:
        raise ConfigurationError(
            f"initialization range [{lo}, {hi}) must lie within "
            f"[{LOWER_BOUND}, {UPPER_BOUND}]")


def rebound(value, lo: float = LOWER_BOUND, hi: float = UPPER_BOUND):
    """Reflect an out-of-range value back across the violated bound.

    A value of -0.7 becomes 0.7 and 100.7 becomes 99.3 under default
    bounds. Unit-scale steps cannot overshoot twice from inside the
    range, so a single reflection suffices; the final clip only guards
    against pathological inputs. Accepts scalars or arrays.
    """
    v = np.asarray(value, dtype=np.float64)
    v = np.where(v < lo, lo + (lo - v), v)
    v = np.where(v > hi, hi - (v - hi), v)
    v = np.clip(v, lo, hi)
    if np.isscalar(value) or np.ndim(value) == 0:
        return float(v)
    return v


def mutate(
    genotype: np.ndarray,
    params: MutationParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """Return a mutated copy of one genotype.

    Each gene independently mutates with probability
    ``params.per_gene_rate``; unmutated genes are copied unchanged.
    """
    return mutate_batch(genotype[np.newaxis, :], params, rng)[0]


def mutate_batch(
    genotypes: np.ndarray,
    params: MutationParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """Vectorized :func:`mutate` over an (N, D) block of genotypes.

    Draws the hit mask first and then one normal step per hit, in
    row-major order, so the consumed stream is a pure function of the
    generator state and the block shape.
    """
    out = np.array(genotypes, dtype=np.float64, copy=True)
    mask = rng.random(out.shape) < params.per_gene_rate
    n_hits = int(mask.sum())
    if n_hits:
        steps = rng.normal(0.0, params.step_stddev, size=n_hits)
        out[mask] = rebound(out[mask] + steps, params.lo, params.hi)
    return out
