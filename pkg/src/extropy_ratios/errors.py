"""Exception hierarchy shared by every module of the package."""


class ExtropyError(Exception):
    """Base class for all package errors."""


class DomainError(ExtropyError, ValueError):
    """Argument outside the domain of an evaluator (non-finite x, zero survival, ...)."""


class DivergentMeasureError(ExtropyError):
    """The requested integral is infinite, e.g. a cumulative measure on unbounded support."""


class QuadratureError(ExtropyError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class DegenerateInputError(ExtropyError, ValueError):
    """Input carries no usable spread: constant samples, disjoint supports, black images."""


class KindMismatchError(ExtropyError, ValueError):
    """Two probability functions of different kinds were paired."""


class AmbiguousAnchorsError(ExtropyError, ValueError):
    """Two anchor images fall within the matching tolerance of each other."""


class ImageFormatError(ExtropyError, ValueError):
    """Malformed image file."""
