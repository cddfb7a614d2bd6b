"""Exception hierarchy shared by every module of the package."""


class HolocontError(Exception):
    """Base class for all package errors."""


class DomainError(HolocontError, ValueError):
    """A point lies where the requested function/branch is undefined."""


class ParameterError(HolocontError, ValueError):
    """An argument is outside its documented range."""


class BranchError(DomainError):
    """A point lies on (or too close to) a branch cut."""


class PoleProximityError(DomainError):
    """Evaluation requested too close to a pole of the kernel."""


class EvaluationError(HolocontError, ArithmeticError):
    """A user function produced a non-finite value."""


class ConfigurationError(HolocontError, ValueError):
    """Contour parameters do not give a convergent integral."""


class CertificateError(HolocontError, ValueError):
    """A decay certificate was violated at a sampled point."""


class AccuracyError(HolocontError, ArithmeticError):
    """Quadrature did not reach its tolerance within the budget.

    The best available estimate is kept on the exception.
    """

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class ExpressionSyntaxError(HolocontError, ValueError):
    """Malformed expression text; ``position`` is the 0-based offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position
