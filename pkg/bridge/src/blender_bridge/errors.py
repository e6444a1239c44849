"""Bridge error types."""


class BridgeError(Exception):
    """Base for everything the bridge raises on purpose."""


class HostMissingError(BridgeError):
    """Raised when the Blender python API is not importable."""


class DocError(BridgeError):
    """The neutral document is missing, malformed, or unsupported."""


class MeshError(BridgeError):
    """The mesh file is missing or its format is not importable."""
