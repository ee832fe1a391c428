"""Exception types shared across the package."""


class MapefitError(Exception):
    """Base class for all package errors."""


class DataError(MapefitError):
    """Invalid or degenerate input data: bad CSV cells, NaN entries, zero spread."""


class FitError(MapefitError):
    """A model fit cannot be performed or failed internally."""


class BoundInputError(MapefitError):
    """Bound-formula inputs violate a hypothesis or an enumeration guard."""
