"""
Domain errors. Services raise these; the API layer maps them to HTTP
responses and the CLI to a nonzero exit status.
"""


class QMCError(ValueError):
    """Base class for every error raised by the toolkit."""


class DigitRangeError(QMCError):
    """A real value or digit lies outside its admissible range."""


class IncompatibleError(QMCError):
    """Operands disagree on base, depth, or shape."""


class IndexBoundError(QMCError):
    """An index exceeds the range the current representation can decide."""


class EnumerationLimitError(QMCError):
    """A configured size guard was tripped."""


class DirectionFileError(QMCError):
    """A direction-number record is malformed or missing."""


class NetFormatError(QMCError):
    """A net description file cannot be parsed."""


class PolynomialError(QMCError):
    """Invalid polynomial arithmetic over Z_b."""


class ParameterError(QMCError):
    """Invalid numerical parameters (alpha, lambda, weights, functions)."""


def check_guard(size: int, limit: int, what: str) -> None:
    """Raise EnumerationLimitError when size exceeds limit."""
    if size > limit:
        raise EnumerationLimitError(f"{what} of size {size} exceeds the limit {limit}")
