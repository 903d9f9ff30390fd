"""Exception hierarchy shared by all curvepart modules.

The CLI maps these onto exit codes: precondition failures exit 2,
convergence failures exit 3, input/parse problems exit 1.
"""


class CurvepartError(Exception):
    """Base class for all errors raised by this package."""


class InputError(CurvepartError):
    """Malformed input file, unknown format, or bad CLI arguments."""


class PreconditionError(CurvepartError):
    """An operation was called on data that violates its stated preconditions."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DomainError(PreconditionError):
    """Argument outside the domain of a function (e.g. eval at t > 1)."""


class NonInteriorCurveError(PreconditionError):
    """Curve leaves the open unit square at an interior parameter."""


class ClassUError(PreconditionError):
    """Function is not piecewise monotone with separated extremum levels.

    Carries the list of violations: (level, witness_max_t, witness_min_t).
    """

    def __init__(self, message, violations=()):
        super().__init__(message, witness=list(violations))
        self.violations = list(violations)


class InfeasiblePerturbationError(PreconditionError):
    """Requested perturbation budget cannot preserve the piece pattern."""


class ConvergenceError(CurvepartError):
    """Iterative refinement failed to reach tolerance; carries best residual."""

    def __init__(self, message, best_residual=None, history=()):
        super().__init__(message)
        self.best_residual = best_residual
        self.history = list(history)


class InternalInvariantError(CurvepartError):
    """A verified-by-construction identity failed; indicates a solver bug."""
