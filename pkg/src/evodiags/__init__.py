"""Search-space diagnostics for evolutionary selection schemes.

Eight handcrafted genotype-to-phenotype translations isolate specific
problem characteristics (smooth exploitation, ordered exploitation,
contradictory objectives, multi-path exploration, and valley-crossing
variants of each); eight parent-selection schemes run against them in
replicated, seeded experiments with per-generation metric tracking and
nonparametric significance testing.

Modules:
    core: genome representation, bounded mutation, population container.
    diagnostics: the eight translation functions and the sawtooth transform.
    selection: truncation, tournament, fitness sharing (genotypic and
        phenotypic), lexicase, nondominated sorting, novelty search, and
        the random control.
    evolve: the per-replicate generational loop.
    metrics: generation records and their CSV format.
    stats: Kruskal-Wallis, Wilcoxon rank-sum, Bonferroni correction.
    cli: experiment grid orchestration and result analysis.
"""

from .core import (
    ConfigurationError,
    Individual,
    MutationParams,
    Population,
    mutate,
    mutate_batch,
    random_genotype,
    random_genotypes,
    rebound,
)
from .diagnostics import (
    DiagnosticKind,
    DiagnosticSpec,
    SawtoothParams,
    apply_valleys,
    contradictory_objectives,
    evaluate,
    evaluate_population,
    exploitation_rate,
    multipath_exploration,
    ordered_exploitation,
    sawtooth,
)
from .evolve import ReplicateConfig, ReplicateResult, run_generation, run_replicate
from .metrics import (
    GenerationRecord,
    activation_gene_coverage,
    has_satisfactory_solution,
    is_satisfactory,
    largest_valley_reached,
    performance,
    read_records_csv,
    satisfactory_trait_coverage,
    snapshot,
    write_records_csv,
)
from .selection import (
    FrontAssignment,
    NoveltyParams,
    SchemeKind,
    SchemeParams,
    dominates,
    fitness_sharing_select,
    lexicase_select,
    niche_count,
    nondominated_fronts,
    novelty_scores,
    novelty_select,
    nsga_select,
    random_select,
    select,
    sharing_kernel,
    stochastic_remainder,
    tournament_select,
    truncation_select,
)
from .stats import SampleGroup, bonferroni, kruskal_wallis, wilcoxon_rank_sum

__version__ = "0.1.0"
