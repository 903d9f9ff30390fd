"""curvepart: exact equal-increment partitions of plane curves.

For a curve from (0,0) to (1,1) through the open unit square, computes
points whose x- and y-increment sequences are positive and equal up to a
cyclic shift, entirely in exact rational arithmetic, plus a coordinated-
level (mountain climbers') solver, a function-graph recursion, an
independent verifier with a brute-force oracle, and a numerical explorer
for the open generalizations.
"""

from .climb import (
    ClimbSolution,
    FlatBumpPlan,
    apply_bumps,
    plan_bumps,
    solve,
    solve_level_traversal,
)
from .errors import (
    ClassUError,
    ConvergenceError,
    CurvepartError,
    DomainError,
    InfeasiblePerturbationError,
    InputError,
    InternalInvariantError,
    NonInteriorCurveError,
    PreconditionError,
)
from .explore import CyclicPermutation, TrialRecord, batch, conjecture_search, random_curve
from .graphcase import GraphSolution, largest_root_chain, solve_graph
from .oracle import VerifyReport, brute_force, closure_residual, closure_shot, verify
from .pipeline import (
    DensitiesResult,
    PartitioningFunctions,
    PartitionResult,
    PipelineTrace,
    Rearrangement,
    build_partitioning_functions,
    extract_points,
    partition_below_diagonal,
    partition_curve,
    partition_densities,
)
from .plcurve import (
    Intersection,
    Overlap,
    PLCurve,
    curve_from_functions,
    curve_intersections,
    diagonal_curve,
    normalize_tail,
)
from .plfun import (
    MonotoneDecomposition,
    PLFunction,
    compose,
    identity,
    level_set,
    monotone_decompose,
    perturb_distinct_extrema,
    pl_eval,
)
from .scalar import Scalar, format_rational, parse_rational, rat

__version__ = "0.1.0"

__all__ = [
    "ClimbSolution", "FlatBumpPlan", "apply_bumps", "plan_bumps", "solve",
    "solve_level_traversal",
    "ClassUError", "ConvergenceError", "CurvepartError", "DomainError",
    "InfeasiblePerturbationError", "InputError", "InternalInvariantError",
    "NonInteriorCurveError", "PreconditionError",
    "CyclicPermutation", "TrialRecord", "batch", "conjecture_search",
    "random_curve",
    "GraphSolution", "largest_root_chain", "solve_graph",
    "VerifyReport", "brute_force", "closure_residual", "closure_shot", "verify",
    "DensitiesResult", "PartitioningFunctions", "PartitionResult",
    "PipelineTrace", "Rearrangement", "build_partitioning_functions",
    "extract_points", "partition_below_diagonal", "partition_curve",
    "partition_densities",
    "Intersection", "Overlap", "PLCurve", "curve_from_functions",
    "curve_intersections", "diagonal_curve", "normalize_tail",
    "MonotoneDecomposition", "PLFunction", "compose", "identity", "level_set",
    "monotone_decompose", "perturb_distinct_extrema", "pl_eval",
    "Scalar", "format_rational", "parse_rational", "rat",
    "__version__",
]
