"""Exception types raised across the package."""


class QGStripError(Exception):
    """Base class for all package errors."""


class ShapeError(QGStripError, ValueError):
    """Matrix or vector dimensions are incompatible."""


class DomainError(QGStripError, ValueError):
    """An argument lies outside the domain an operation accepts."""


class SingularityError(QGStripError, ArithmeticError):
    """A matrix that must be inverted is singular to working tolerance."""

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class NumericError(QGStripError, ArithmeticError):
    """A factorization or iteration failed to converge."""


class NoModeError(QGStripError):
    """No null vector of the secular matrix at the requested point."""

    def __init__(self, message, sigma_min=None):
        super().__init__(message)
        self.sigma_min = sigma_min


class BandLostError(QGStripError):
    """Band continuation could not find the next root."""

    def __init__(self, message, last_theta=None):
        super().__init__(message)
        self.last_theta = last_theta


class ConfigError(QGStripError, ValueError):
    """Invalid run configuration; ``field`` names the offending entry."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
