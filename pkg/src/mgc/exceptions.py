"""Exception hierarchy shared across the package."""


class MGCError(Exception):
    """Base class for all errors raised by :mod:`mgc`."""


class InputFormatError(MGCError, ValueError):
    """Malformed input table (ragged rows, blank lines, bad cells)."""


class ShapeError(MGCError, ValueError):
    """Array dimensions do not match what the operation requires."""


class SizeError(MGCError, ValueError):
    """Too few samples for the requested operation."""


class DomainError(MGCError, ValueError):
    """Values fall outside their admissible range."""


class NumericError(MGCError, ArithmeticError):
    """A computation produced non-finite values."""
