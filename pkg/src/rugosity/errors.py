"""Exception types shared across the package."""


class RugosityError(Exception):
    """Base class for all errors raised by rugosity."""


class FormatError(RugosityError, ValueError):
    """Malformed MVOX header or payload."""


class ShapeError(RugosityError, ValueError):
    """Two grids that must share dimensions do not."""


class EmptySurfaceError(RugosityError, ValueError):
    """An operation needs at least one surface voxel."""


class UndefinedMetricError(RugosityError, ArithmeticError):
    """A metric's denominator vanishes for the given masks."""
