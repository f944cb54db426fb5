"""Exact exit laws of killed lattice walks, a verified suffix-swap injection
on path pairs, and log-concavity audits of the resulting count families."""

from .errors import (
    BadShiftUnit,
    ConstructionFailure,
    DimensionMismatch,
    DisconnectedColumns,
    EmptyColumn,
    EnumerationTooLarge,
    InvalidInstance,
    NoConvergence,
    NoIntersection,
    RegionError,
    SingularSystem,
    UnreachableB,
)
from .injection import (
    ConstructionTrace,
    InjectionInstance,
    InjectionReport,
    PathPair,
    domain_pairs,
    fomin_swap,
    key_intersection,
    loop_erase,
    phi_forward,
    phi_inverse,
    profile_refined_inequality,
    verify_injection,
)
from .lattice import (
    DYCK,
    SCHRODER,
    SQUARE,
    SQUARE_DIAG,
    STEP_SETS,
    STEP_VECTORS,
    LatticePath,
    LatticePoint,
    ProjectionProfile,
    Region,
    StepSet,
    boundary_paths,
    contains,
    path_in_region,
    projection_profile,
    shift_path,
    validate_region,
    vertex_intersections,
)
from .mc import SimulationResult, compare_empirical, simulate
from .paths import (
    ballot,
    binomial,
    count_free_paths_by_length,
    count_paths,
    count_paths_through,
    delannoy,
    enumerate_free_paths,
    first_exit_mass_lower_bound,
)
from .walker import (
    ExitDistribution,
    LogConcavityReport,
    Strip,
    StripResult,
    TransitionModel,
    exact_exit_distribution,
    ladder_strip,
    log_concavity_check,
    monotone_crossing_distribution,
    truncated_strip_distribution,
    value_iteration_distribution,
)

__version__ = "0.1.0"
