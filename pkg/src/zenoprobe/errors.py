"""Exception types raised across the package."""


class DomainError(ValueError):
    """A parameter lies outside its physical domain."""


class SingularityError(ArithmeticError):
    """A closed-form expression is evaluated at a pole."""


class ConvergenceError(ArithmeticError):
    """Numerical quadrature failed to reach the requested tolerance.

    The best available estimate is kept on ``estimate``.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class NonIdentifiableError(ValueError):
    """The data carry no information about the requested parameter."""


class FitError(ValueError):
    """A decay fit cannot be performed on the supplied curve."""


class ResourceLimitError(RuntimeError):
    """A brute-force computation would exceed its size limit."""
