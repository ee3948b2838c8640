"""Exception types shared across the package."""


class TubalError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(TubalError, ValueError):
    """Array shapes or axis arguments do not conform."""


class FileFormatError(TubalError, ValueError):
    """A tensor or image file is malformed or unsupported."""


class DegenerateInputError(TubalError, ValueError):
    """Input is degenerate for the requested quantity (e.g. zero-mean band)."""


class ImagResidueTooLarge(TubalError, ArithmeticError):
    """An inverse DFT left an imaginary part above tolerance.

    This signals a broken conjugate-symmetry invariant upstream rather than
    ordinary floating-point noise, so it is an error, not a warning.
    """


class NumericalError(TubalError, ArithmeticError):
    """An internal numerical consistency check failed."""
