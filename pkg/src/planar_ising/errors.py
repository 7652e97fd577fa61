"""Exception hierarchy shared by all modules."""


class PlanarIsingError(Exception):
    """Base class for every error raised by the package."""


class GraphFormatError(PlanarIsingError, ValueError):
    """Malformed graph document or structurally invalid graph data."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class EmbeddingError(PlanarIsingError, ValueError):
    """Rotation system is not planar or the boundary is not a face."""


class OrderingError(PlanarIsingError, ValueError):
    """Marked boundary points violate the required counterclockwise order."""


class CapacityError(PlanarIsingError):
    """An exhaustive computation would exceed its configured size cap."""


class InfeasibleError(PlanarIsingError, ValueError):
    """The requested source set has an empty configuration space."""
