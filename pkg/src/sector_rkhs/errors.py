"""Exception and warning types shared by every module."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class QuadratureError(ArithmeticError):
    """A quadrature failed to reach its tolerance.

    ``estimate`` carries the best value obtained and ``error`` the achieved
    error estimate, so callers can decide whether to accept it.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class StabilityError(ArithmeticError):
    """A time-stepping scheme produced growth beyond its bound check."""


class AccuracyWarning(UserWarning):
    """A result was returned but its accuracy could not be certified."""


class BranchError(ValueError):
    """A multivalued power was requested without a declared branch."""
