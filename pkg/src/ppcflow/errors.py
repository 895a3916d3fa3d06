"""Exception types shared across the toolkit."""


class PPCError(Exception):
    """Base class for all domain errors raised by ppcflow."""


class ParameterError(PPCError, ValueError):
    """An operation received an invalid parameter (bad width, non power of two, ...)."""


class UnsupportedPreprocessing(ParameterError):
    pass


class CapacityError(PPCError):
    """Problem exceeds an enumeration or exactness guard."""


class DataError(PPCError, ValueError):
    """Input data lies outside its declared domain."""


class RangeViolation(DataError):
    """A strict block received an operand outside its natural range."""


class AccumulatorOverflow(PPCError, ArithmeticError):
    pass


class FormatError(PPCError, ValueError):
    """Malformed PLA or PGM input.  ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
