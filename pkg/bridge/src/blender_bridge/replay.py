"""Replay a neutral animation document inside Blender.

This is a dumb replayer: all interpretation and math live in the producer
package. Here the document's bones become edit bones (each placed by its
extrusion offset), the optional mesh is imported, placed, and bound with
automatic weights, and every stored key becomes one keyframe_insert call.

The host API (bpy) is imported lazily so the package imports fine outside
Blender; replay() raises HostMissingError when no host is present.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .doc import (
    LOCATION_CHANNEL,
    ROOT_TARGET,
    ROTATION_CHANNEL,
    NeutralDoc,
    Vec3,
    load_doc,
)
from .errors import DocError, HostMissingError, MeshError

# A child whose head sits on its parent's tail this close is a connected bone.
_CONNECT_EPSILON = 1e-9

_MESH_IMPORTERS = (".obj", ".glb", ".gltf")


@dataclass(frozen=True)
class BridgeJob:
    """One replay invocation: the document, optional mesh, and outputs."""

    doc_path: str | Path
    mesh_path: str | Path | None = None
    blend_path: str | Path | None = None
    video_path: str | Path | None = None
    render_video: bool = False

    def __post_init__(self) -> None:
        if self.render_video and not self.video_path:
            raise ValueError("render_video needs a video_path")


@dataclass(frozen=True)
class ReplayResult:
    armature_name: str
    bone_names: tuple[str, ...]
    keyframe_counts: dict[tuple[str, str], int]
    blend_path: Path | None
    video_path: Path | None


def _require_host():
    try:
        import bpy
    except ModuleNotFoundError as exc:
        raise HostMissingError(
            "the bpy module is not importable; run inside "
            "`blender --background --python <script>`"
        ) from exc
    return bpy


def mesh_location(bound_box, scale: Vec3, tau: Vec3) -> Vec3:
    """World location for the imported mesh from its local bounding box.

    Upstream models arrive Y-up, so the box's index-1 axis is the vertical
    and index 2 is depth: the mesh is centered laterally and in depth,
    lifted half its index-1 height, then nudged by tau per component.
    """
    lo = [min(corner[i] for corner in bound_box) for i in range(3)]
    hi = [max(corner[i] for corner in bound_box) for i in range(3)]
    return (
        (lo[0] + hi[0]) / 2.0 * scale[0] + tau[0],
        (lo[2] + hi[2]) / 2.0 * scale[2] + tau[1],
        (hi[1] - lo[1]) / 2.0 * scale[1] + tau[2],
    )


def _build_armature(bpy, doc: NeutralDoc, name: str = "rigmotion"):
    data = bpy.data.armatures.new(name)
    obj = bpy.data.objects.new(name, data)
    bpy.context.collection.objects.link(obj)
    bpy.context.view_layer.objects.active = obj
    bpy.ops.object.mode_set(mode="EDIT")

    edit_bones = {}
    for bone in doc.armature.bones:
        eb = data.edit_bones.new(bone.name)
        eb.head = bone.head
        offset = bone.offset
        eb.tail = tuple(h + o for h, o in zip(bone.head, offset))
        if bone.parent is not None:
            parent = edit_bones[bone.parent]
            eb.parent = parent
            eb.use_connect = all(
                abs(h - t) <= _CONNECT_EPSILON
                for h, t in zip(tuple(eb.head), tuple(parent.tail))
            )
        edit_bones[bone.name] = eb

    bpy.ops.object.mode_set(mode="OBJECT")
    return obj


def _import_mesh(bpy, path: Path):
    suffix = path.suffix.lower()
    if suffix not in _MESH_IMPORTERS:
        raise MeshError(f"{path}: unsupported mesh format {suffix!r}")
    if not path.is_file():
        raise MeshError(f"{path}: mesh file not found")

    before = set(bpy.data.objects)
    if suffix == ".obj":
        bpy.ops.wm.obj_import(filepath=str(path))
    else:
        bpy.ops.import_scene.gltf(filepath=str(path))
    imported = [o for o in set(bpy.data.objects) - before if o.type == "MESH"]
    if not imported:
        raise MeshError(f"{path}: import produced no mesh object")
    return imported[0]


def _place_and_bind_mesh(bpy, mesh_obj, armature_obj, doc: NeutralDoc) -> None:
    mesh_obj.location = mesh_location(
        mesh_obj.bound_box, tuple(mesh_obj.scale), doc.armature.placement.tau
    )
    mesh_obj.select_set(True)
    armature_obj.select_set(True)
    bpy.context.view_layer.objects.active = armature_obj
    bpy.ops.object.parent_set(type="ARMATURE_AUTO")


def _insert_keys(bpy, armature_obj, doc: NeutralDoc) -> dict[tuple[str, str], int]:
    counts: dict[tuple[str, str], int] = {}
    bpy.context.view_layer.objects.active = armature_obj
    bpy.ops.object.mode_set(mode="POSE")
    for track in doc.tracks:
        if track.target == ROOT_TARGET and track.channel == LOCATION_CHANNEL:
            for frame, value in track.keys:
                armature_obj.location = value
                armature_obj.keyframe_insert(data_path="location", frame=frame)
        elif track.channel == ROTATION_CHANNEL:
            pbone = armature_obj.pose.bones[track.target]
            pbone.rotation_mode = "XYZ"
            for frame, value in track.keys:
                pbone.rotation_euler = value
                pbone.keyframe_insert(data_path="rotation_euler", frame=frame)
        else:  # location keys on a bone never occur in valid docs
            raise DocError(f"track {track.target}/{track.channel} is not replayable")
        counts[(track.target, track.channel)] = len(track.keys)
    bpy.ops.object.mode_set(mode="OBJECT")
    return counts


def replay(job: BridgeJob) -> ReplayResult:
    """Build the scene for one document and write the requested outputs."""
    doc = load_doc(job.doc_path)
    bpy = _require_host()

    armature_obj = _build_armature(bpy, doc)
    if job.mesh_path:
        mesh_obj = _import_mesh(bpy, Path(job.mesh_path))
        _place_and_bind_mesh(bpy, mesh_obj, armature_obj, doc)
    counts = _insert_keys(bpy, armature_obj, doc)

    scene = bpy.context.scene
    scene.render.fps = doc.fps
    scene.frame_start = 1
    scene.frame_end = max(doc.total_frames, 1)

    blend_path = Path(job.blend_path) if job.blend_path else None
    if blend_path:
        bpy.ops.wm.save_as_mainfile(filepath=str(blend_path))

    video_path = Path(job.video_path) if job.video_path else None
    if job.render_video:
        scene.render.filepath = str(video_path)
        scene.render.image_settings.file_format = "FFMPEG"
        scene.render.ffmpeg.format = "MPEG4"
        bpy.ops.render.render(animation=True)

    return ReplayResult(
        armature_name=armature_obj.name,
        bone_names=tuple(doc.armature.bone_names()),
        keyframe_counts=counts,
        blend_path=blend_path,
        video_path=video_path if job.render_video else None,
    )
