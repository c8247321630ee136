"""Exception types shared across the package."""


class LgvarError(Exception):
    """Base class for domain errors raised by this package."""


class OffGraphError(LgvarError):
    """A point was expected to lie on the segment union but does not."""


class DisconnectedError(LgvarError):
    """The segment union is not connected.

    ``components`` lists the segment indices of each connected component.
    """

    def __init__(self, message: str, components=None):
        super().__init__(message)
        self.components = components or []


class ImproperRepresentationError(LgvarError):
    """Segments intersect somewhere other than shared endpoints."""
