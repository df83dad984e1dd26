"""Exception types.

Two families: input problems (``ValidationError``, CLI exit status 2) and
numerical failures (``ConvergenceError``, CLI exit status 3).
"""


class IsoresError(Exception):
    pass


class ValidationError(IsoresError, ValueError):
    pass


class NonSmoothPotentialError(ValidationError):
    pass


class PoleProximityError(ValidationError):
    pass


class ConvergenceError(IsoresError, ArithmeticError):
    pass


class ResolutionError(ConvergenceError):
    """Grid or quadrature too coarse for the requested quantity."""


class ZeroOnBoundaryError(ConvergenceError):
    pass


class BudgetExceededError(ConvergenceError):
    pass


class InequalityViolation(ConvergenceError):
    """A proven inequality failed numerically: the quadrature is misconfigured."""
