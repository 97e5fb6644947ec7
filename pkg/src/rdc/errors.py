"""Exception types shared across the package."""


class RdcError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(RdcError, ValueError):
    """An argument violates a precondition (shape, size, range, flag)."""


class DataFormatError(RdcError, ValueError):
    """A delimited input could not be parsed, or a tag is unknown."""


class DegenerateDataError(RdcError, ValueError):
    """The data admits no meaningful answer (zero variance, identical rows,
    numerically singular covariance)."""


class CapacityError(RdcError, ValueError):
    """The input exceeds a resource budget; subsample and retry."""
