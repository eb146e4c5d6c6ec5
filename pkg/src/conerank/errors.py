"""Exception types shared across the package."""


class ConerankError(Exception):
    """Base class for all errors raised by conerank."""


class FormatError(ConerankError):
    """Malformed input file: ragged rows, bad literals, or non-finite floats."""


class PreconditionError(ConerankError):
    """An operation's documented precondition was violated."""


class DimensionError(PreconditionError):
    """Operand shapes are incompatible."""
