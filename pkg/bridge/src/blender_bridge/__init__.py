"""Blender-side replayer for rigmotion neutral animation documents."""

from .doc import ArmatureDoc, BoneDoc, NeutralDoc, PlacementDoc, TrackDoc, load_doc
from .errors import BridgeError, DocError, HostMissingError, MeshError
from .replay import BridgeJob, ReplayResult, mesh_location, replay

__all__ = [
    "ArmatureDoc",
    "BoneDoc",
    "BridgeError",
    "BridgeJob",
    "DocError",
    "HostMissingError",
    "MeshError",
    "NeutralDoc",
    "PlacementDoc",
    "ReplayResult",
    "TrackDoc",
    "load_doc",
    "mesh_location",
    "replay",
]
