class CubeCutError(ValueError):
    """Invalid input to a cubecut routine."""


class ScaleError(CubeCutError):
    """The requested instance exceeds a documented enumeration or memory cap."""
