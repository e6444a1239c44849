"""Reader for the neutral animation document.

The document is the producer package's `anim.json`: an armature (bones with
absolute head/tail coordinates plus mesh placement), keyframe tracks, and
the semantic keyframe index. This module only parses and validates; it
never touches the host API, so it works in any python.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DocError

SUPPORTED_SCHEMA_VERSIONS = (1,)

ROTATION_CHANNEL = "rotation_euler"
LOCATION_CHANNEL = "location"
ROOT_TARGET = "root"

Vec3 = tuple[float, float, float]


@dataclass(frozen=True)
class BoneDoc:
    name: str
    parent: str | None
    head: Vec3
    tail: Vec3

    @property
    def offset(self) -> Vec3:
        """The extrusion step that produced this bone."""
        return tuple(t - h for t, h in zip(self.tail, self.head))


@dataclass(frozen=True)
class PlacementDoc:
    location: Vec3 = (0.0, 0.0, 0.0)
    tau: Vec3 = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class ArmatureDoc:
    bones: tuple[BoneDoc, ...]
    placement: PlacementDoc

    def bone_names(self) -> list[str]:
        return [b.name for b in self.bones]


@dataclass(frozen=True)
class TrackDoc:
    target: str
    channel: str
    keys: tuple[tuple[int, Vec3], ...]


@dataclass(frozen=True)
class NeutralDoc:
    fps: int
    frames_per_key: int
    total_frames: int
    armature: ArmatureDoc
    tracks: tuple[TrackDoc, ...]
    semantic: tuple[tuple[int, tuple[int, int]], ...] = field(default=())


def _vec3(value, context: str) -> Vec3:
    try:
        x, y, z = (float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise DocError(f"{context}: expected an [x, y, z] triple") from exc
    return (x, y, z)


def _parse_bones(raw_bones, context: str) -> tuple[BoneDoc, ...]:
    bones: list[BoneDoc] = []
    seen: set[str] = set()
    for raw in raw_bones:
        try:
            name = raw["name"]
            parent = raw["parent"]
            head = _vec3(raw["head"], f"{context}: bone {raw.get('name')!r} head")
            tail = _vec3(raw["tail"], f"{context}: bone {raw.get('name')!r} tail")
        except (KeyError, TypeError) as exc:
            raise DocError(f"{context}: bone entry missing {exc}") from exc
        if name in seen:
            raise DocError(f"{context}: duplicate bone name {name!r}")
        if parent is not None and parent not in seen:
            # bones arrive in creation order, so parents always come first
            raise DocError(f"{context}: bone {name!r} references unknown parent {parent!r}")
        seen.add(name)
        bones.append(BoneDoc(name=name, parent=parent, head=head, tail=tail))
    if not bones:
        raise DocError(f"{context}: armature has no bones")
    return tuple(bones)


def _parse_tracks(raw_tracks, bone_names: set[str], context: str) -> tuple[TrackDoc, ...]:
    tracks: list[TrackDoc] = []
    for raw in raw_tracks:
        try:
            target = raw["target"]
            channel = raw["channel"]
            raw_keys = raw["keys"]
        except (KeyError, TypeError) as exc:
            raise DocError(f"{context}: track entry missing {exc}") from exc
        if channel not in (ROTATION_CHANNEL, LOCATION_CHANNEL):
            raise DocError(f"{context}: unknown channel {channel!r}")
        if target != ROOT_TARGET and target not in bone_names:
            raise DocError(f"{context}: track targets unknown bone {target!r}")
        keys: list[tuple[int, Vec3]] = []
        last_frame = -1
        for entry in raw_keys:
            try:
                frame = int(entry[0])
                value = _vec3(entry[1], f"{context}: key on {target}")
            except (TypeError, ValueError, IndexError) as exc:
                raise DocError(f"{context}: malformed key on {target!r}") from exc
            if frame <= last_frame:
                raise DocError(f"{context}: keys on {target!r} must increase in frame")
            last_frame = frame
            keys.append((frame, value))
        tracks.append(TrackDoc(target=target, channel=channel, keys=tuple(keys)))
    return tuple(tracks)


def load_doc(path: str | Path) -> NeutralDoc:
    """Read and validate a neutral animation document."""
    p = Path(path)
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise DocError(f"{p}: document not found") from exc
    except json.JSONDecodeError as exc:
        raise DocError(f"{p}: invalid JSON ({exc})") from exc

    version = raw.get("schema_version")
    if version not in SUPPORTED_SCHEMA_VERSIONS:
        raise DocError(f"{p}: unsupported schema_version {version!r}")

    try:
        arm_raw = raw["armature"]
        bones = _parse_bones(arm_raw["bones"], str(p))
        placement_raw = arm_raw.get("placement", {})
        placement = PlacementDoc(
            location=_vec3(placement_raw.get("location", (0, 0, 0)), f"{p}: placement"),
            tau=_vec3(placement_raw.get("tau", (0, 0, 0)), f"{p}: tau"),
        )
        armature = ArmatureDoc(bones=bones, placement=placement)
        tracks = _parse_tracks(raw["tracks"], set(armature.bone_names()), str(p))
        doc = NeutralDoc(
            fps=int(raw["fps"]),
            frames_per_key=int(raw["frames_per_key"]),
            total_frames=int(raw["total_frames"]),
            armature=armature,
            tracks=tracks,
            semantic=tuple(
                (int(frame), (int(span[0]), int(span[1])))
                for frame, span in raw.get("semantic", ())
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DocError(f"{p}: malformed document ({exc})") from exc

    if doc.fps < 1 or doc.frames_per_key < 1 or doc.total_frames < 0:
        raise DocError(f"{p}: non-positive timing fields")
    max_key = max((t.keys[-1][0] for t in doc.tracks if t.keys), default=0)
    if doc.total_frames != max_key:
        raise DocError(
            f"{p}: total_frames {doc.total_frames} disagrees with the last key {max_key}"
        )
    return doc
