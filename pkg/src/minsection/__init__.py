"""Hierarchical nonlinear least-squares minimization.

Split the parameter vector into retained and eliminated blocks, eliminate
the latter per slice (exactly for partially linear models, by safeguarded
Newton when the block is convex), and minimize the resulting minimal
section by coordinate-grid bracketing with golden-section refinement.
Companion tooling: implicit-graph traces with residual certificates,
per-parameter sensitivity sections with sub-level projection intervals,
critical-point censuses with index counting, and anchor-based recovery of
quasi-degenerate minima.
"""

from .morse import (
    CriticalPoint,
    DegenerateCriticalPointError,
    MorseCensus,
    census_report,
    check_outward_gradient,
    find_critical_points,
    morse_equality_audit,
)
from .numerics import (
    BoundaryStepWarning,
    DerivativeReport,
    EigenSummary,
    RankDeficiencyError,
    eigen_index,
    fd_gradient,
    fd_hessian,
    fd_y_block,
    is_positive_definite,
    linear_lsq_solve,
)
from .problem_io import (
    ProblemDefinition,
    ProblemFileError,
    load_data_csv,
    load_problem_file,
)
from .problems import (
    MeritFunction,
    ParameterSplit,
    PartiallyLinearModel,
    ProblemCatalogEntry,
    as_parameter_vector,
    build_partially_linear,
    build_residual_merit,
    catalog,
    default_box,
    get_problem,
    model_split,
    random_quadratic_problem,
)
from .sections import (
    ImplicitTrace,
    MinimalSection1D,
    NestingReport,
    SubLevelInterval,
    TraceError,
    TraceIndexWarning,
    minimal_section_1d,
    nesting_check,
    sublevel_interval,
    trace_implicit,
    write_section_csv,
)
from .solver import (
    BracketError,
    BracketTriplet,
    EquivalenceReport,
    RegularizationRecovery,
    SolveError,
    SolveReport,
    Tolerances,
    bracket_on_grid,
    equivalence_report,
    format_solve_report,
    golden_refine,
    recover_from_anchor,
    solve_direct,
    solve_hierarchical,
)
from .subminimize import (
    ConvexityCertificate,
    ConvexityError,
    SliceProblem,
    SubMinimizeError,
    SubMinimum,
    probe_full_convexity,
    probe_y_convexity,
    solve_slice,
    subminimize_linear,
    subminimize_newton,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryStepWarning",
    "BracketError",
    "BracketTriplet",
    "ConvexityCertificate",
    "ConvexityError",
    "CriticalPoint",
    "DegenerateCriticalPointError",
    "DerivativeReport",
    "EigenSummary",
    "EquivalenceReport",
    "ImplicitTrace",
    "MeritFunction",
    "MinimalSection1D",
    "MorseCensus",
    "NestingReport",
    "ParameterSplit",
    "PartiallyLinearModel",
    "ProblemCatalogEntry",
    "ProblemDefinition",
    "ProblemFileError",
    "RankDeficiencyError",
    "RegularizationRecovery",
    "SliceProblem",
    "SolveError",
    "SolveReport",
    "SubLevelInterval",
    "SubMinimizeError",
    "SubMinimum",
    "Tolerances",
    "TraceError",
    "TraceIndexWarning",
    "as_parameter_vector",
    "bracket_on_grid",
    "build_partially_linear",
    "build_residual_merit",
    "catalog",
    "census_report",
    "check_outward_gradient",
    "default_box",
    "eigen_index",
    "equivalence_report",
    "fd_gradient",
    "fd_hessian",
    "fd_y_block",
    "find_critical_points",
    "format_solve_report",
    "get_problem",
    "golden_refine",
    "is_positive_definite",
    "linear_lsq_solve",
    "load_data_csv",
    "load_problem_file",
    "minimal_section_1d",
    "model_split",
    "morse_equality_audit",
    "nesting_check",
    "probe_full_convexity",
    "probe_y_convexity",
    "random_quadratic_problem",
    "recover_from_anchor",
    "solve_direct",
    "solve_hierarchical",
    "solve_slice",
    "subminimize_linear",
    "subminimize_newton",
    "sublevel_interval",
    "trace_implicit",
    "write_section_csv",
]
