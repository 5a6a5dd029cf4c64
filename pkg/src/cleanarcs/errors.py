"""Exception types shared across the package."""


class CleanArcsError(Exception):
    """Base class for all package-specific errors."""


class SurfaceParameterError(CleanArcsError, ValueError):
    """A surface was requested with out-of-range parameters."""


class SurfaceSpecError(CleanArcsError, ValueError):
    """A surface spec string could not be parsed; carries the offending position."""

    def __init__(self, text: str, position: int, message: str):
        super().__init__(f"cannot parse {text!r} at position {position}: {message}")
        self.text = text
        self.position = position


class UnsupportedSurfaceError(CleanArcsError, ValueError):
    """The requested operation is not defined for this surface family."""


class MalformedArcError(CleanArcsError, ValueError):
    """A raw arc itinerary is disconnected or uses a band not adjacent to the current disk."""


class BasisError(CleanArcsError, ValueError):
    """A cycle is not in the span of the homology basis."""


class StructureError(CleanArcsError, ValueError):
    """A graph given as a tree is not a tree (cycle detected, or disconnected)."""


class UncleanCutError(CleanArcsError, ValueError):
    """Cut invariants were requested along an arc that is not clean."""
