"""Exact counting and classification of Hamiltonian cycles in hypercubes.

The package counts undirected Hamiltonian cycles (equivalently, cyclic
n-bit Gray codes) and perfect matchings of the n-cube exactly, classifies
the cycles up to cube automorphisms and by direction-weight spectrum,
factors the resulting counts, and evaluates the known analytic bounds.
The ``graycensus`` command line ties it all into a census report.
"""

from .bounds import (
    HISTORICAL_BOUNDS_H6,
    BoundValue,
    bounds_csv,
    feder_subi_upper,
    historical_bounds_table,
    knuth_lower_bound,
    perezhogin_potapov_bounds,
)
from .classify import (
    MAX_BRUTE_FORCE_DIMENSION,
    MAX_ENUMERATION_DIMENSION,
    ORBIT_CONVENTION,
    OrbitRecord,
    OrbitSummary,
    burnside_orbit_count,
    canonical_form,
    classify_automorphism,
    classify_weights,
    count_fixed_cycles,
    enumerate_canonical_prefix_cycles,
    weight_spectrum,
)
from .counting import (
    TASK_HAMILTONIAN,
    TASK_MATCHINGS,
    CheckpointCorrupt,
    CheckpointError,
    CheckpointMismatch,
    CountRun,
    EdgeOrder,
    MemoryBudgetExceeded,
    count_hamiltonian_cycles,
    count_perfect_matchings,
    default_edge_order,
    directed_count,
    direction_major_order,
    equivalence_count,
    frontier_minimizing_order,
    natural_edge_order,
    resume_from_checkpoint,
    save_checkpoint,
)
from .cube import (
    MAX_DIMENSION,
    CubeGraph,
    CycleEdgeSet,
    DeltaSequence,
    PartitionCheck,
    SignedPermutation,
    all_automorphisms,
    automorphism_group_order,
    build_cube,
    delta_to_edge_set,
    edge_set_to_deltas,
    hamilton_orientations_per_partition,
    random_automorphism,
    validate_delta,
    verify_cycle_partition,
)
from .numtheory import (
    Factorization,
    check_half_factorial_divisibility,
    factorize,
    is_probable_prime,
    odd_prime_divisor_count,
)

__version__ = "1.0.0"

__all__ = [
    "HISTORICAL_BOUNDS_H6",
    "BoundValue",
    "bounds_csv",
    "feder_subi_upper",
    "historical_bounds_table",
    "knuth_lower_bound",
    "perezhogin_potapov_bounds",
    "MAX_BRUTE_FORCE_DIMENSION",
    "MAX_ENUMERATION_DIMENSION",
    "ORBIT_CONVENTION",
    "OrbitRecord",
    "OrbitSummary",
    "burnside_orbit_count",
    "canonical_form",
    "classify_automorphism",
    "classify_weights",
    "count_fixed_cycles",
    "enumerate_canonical_prefix_cycles",
    "weight_spectrum",
    "TASK_HAMILTONIAN",
    "TASK_MATCHINGS",
    "CheckpointCorrupt",
    "CheckpointError",
    "CheckpointMismatch",
    "CountRun",
    "EdgeOrder",
    "MemoryBudgetExceeded",
    "count_hamiltonian_cycles",
    "count_perfect_matchings",
    "default_edge_order",
    "directed_count",
    "direction_major_order",
    "equivalence_count",
    "frontier_minimizing_order",
    "natural_edge_order",
    "resume_from_checkpoint",
    "save_checkpoint",
    "MAX_DIMENSION",
    "CubeGraph",
    "CycleEdgeSet",
    "DeltaSequence",
    "PartitionCheck",
    "SignedPermutation",
    "all_automorphisms",
    "automorphism_group_order",
    "build_cube",
    "delta_to_edge_set",
    "edge_set_to_deltas",
    "hamilton_orientations_per_partition",
    "random_automorphism",
    "validate_delta",
    "verify_cycle_partition",
    "Factorization",
    "check_half_factorial_divisibility",
    "factorize",
    "is_probable_prime",
    "odd_prime_divisor_count",
    "__version__",
]
