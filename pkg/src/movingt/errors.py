"""Exception taxonomy.

The CLI maps these onto exit codes: argument/domain problems are usage
errors (2), bad or insufficient data is a data error (3), and numerical
failures such as non-convergence are reported as 4.
"""


class MovingTError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MovingTError, ValueError):
    """An argument or configuration value is outside its allowed domain."""


class DivergentMomentError(DomainError):
    """Requested an absolute moment E|x|^p with p >= nu (infinite)."""


class DegenerateDataError(MovingTError, ValueError):
    """Data is structurally unusable (zero moments, nonpositive prices...)."""


class SeriesTooShortError(MovingTError, ValueError):
    """Input series is shorter than the operation requires."""


class ParseError(MovingTError, ValueError):
    """A file could not be parsed; the message names line and column."""


class MonotonicityError(MovingTError, RuntimeError):
    """A lookup table that must be strictly monotone is not."""


class NonConvergenceError(MovingTError, RuntimeError):
    """An iterative numerical routine failed to converge."""
