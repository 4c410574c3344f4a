"""Exception types raised by the package."""


class SteinerError(Exception):
    """Base class for all package errors."""


class ShapeOutOfDomain(SteinerError):
    """The shape's support leaves the ball inscribed in the grid domain."""


class BadMaskFile(SteinerError):
    """A PGM mask could not be parsed."""


class EmptySet(SteinerError):
    """An operation needs a set of positive volume."""


class GridMismatch(SteinerError):
    """Two fields live on different grids."""


class ZeroVector(SteinerError):
    """A direction was requested from the zero vector."""


class EmptyCycle(SteinerError):
    """A cyclic direction source was given no directions."""


class ConfigInvalid(SteinerError):
    """A run configuration is inconsistent."""
