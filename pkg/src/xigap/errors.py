"""Exception hierarchy shared by every xigap module."""


class XigapError(Exception):
    """Base class for all errors raised by xigap."""


class DomainError(XigapError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class CapacityError(XigapError, ValueError):
    """Request exceeds a precomputed table or a documented height cap."""


class PrecisionError(XigapError, ArithmeticError):
    """Requested accuracy cannot be reached with double precision."""


class PoleProximityError(XigapError, ArithmeticError):
    """Evaluation point too close to a pole; the caller should shrink its interval."""


class ConditioningError(XigapError, ArithmeticError):
    """Quotient evaluated too close to a zero of its denominator."""


class DegenerateError(XigapError, ValueError):
    """Closed form undefined for the given parameters (e.g. U = 0)."""


class AccuracyError(XigapError, ArithmeticError):
    """Adaptive quadrature ran out of panels.

    ``value`` and ``error`` hold the best estimate reached.
    """

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class SearchFailure(XigapError, RuntimeError):
    """Optimizer found no h1 = 1 crossing; ``trace`` keeps what was tried."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


class ValidationError(XigapError, ValueError):
    """Run configuration rejected before dispatch."""
