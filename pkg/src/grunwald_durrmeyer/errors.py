"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class EvaluationError(ArithmeticError):
    """A function produced a non-finite value where a finite one was required."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class ConfigurationError(ValueError):
    """A numerical configuration is inconsistent, e.g. an under-resolved quadrature rule."""
