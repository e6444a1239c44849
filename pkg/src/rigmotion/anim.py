"""Keyframe assembly from quantized actions, plus JSON and BVH export.

Keys land every frames_per_key frames after the running cursor; rotations
accumulate additively per bone (each new key starts from the last keyed
pose). Composition of multi-axis rotations is additive Euler by design,
which is a documented simplification.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .cmdlang import ActionSpec, TURN_DEFAULT_DEGREES, UNSET_DEGREES
from .rig import Armature, SCHEMA_VERSION, Vec3, armature_from_doc, armature_to_doc

DEFAULT_FPS = 24
DEFAULT_FRAMES_PER_KEY = 10

# One translation step moves the root this fraction of the armature height.
STEP_HEIGHT_FRACTION = 0.25

ROTATION_CHANNEL = "rotation_euler"
LOCATION_CHANNEL = "location"
ROOT_TARGET = "root"

_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}


@dataclass
class KeyframeTrack:
    """Key sequence for one (target, channel) pair; frames strictly increase."""

    target: str
    channel: str
    keys: list[tuple[int, Vec3]] = field(default_factory=list)

    def last_value(self) -> Vec3:
        return self.keys[-1][1] if self.keys else (0.0, 0.0, 0.0)

    def add_key(self, frame: int, value: Vec3) -> None:
        if self.keys and frame <= self.keys[-1][0]:
            raise ValueError(
                f"key frame {frame} not after the last key "
                f"({self.keys[-1][0]}) on {self.target}/{self.channel}"
            )
        self.keys.append((frame, tuple(float(v) for v in value)))

    def value_at(self, frame: int) -> Vec3:
        """Step-hold sample: the latest key at or before the frame."""
        value = (0.0, 0.0, 0.0)
        for key_frame, key_value in self.keys:
            if key_frame > frame:
                break
            value = key_value
        return value


@dataclass(frozen=True)
class AnimateResult:
    """Cursor after applying actions: last keyed frame and total frame count."""

    last_frame: int = 0
    all_frames: int = 0

    def __post_init__(self) -> None:
        if self.last_frame < 0 or self.all_frames < 0:
            raise ValueError("frame counters must be >= 0")
        if self.last_frame > self.all_frames:
            raise ValueError("last_frame cannot exceed all_frames")


@dataclass
class AnimationDoc:
    """An armature, its keyframe tracks, and the semantic action index."""

    armature: Armature
    fps: int = DEFAULT_FPS
    frames_per_key: int = DEFAULT_FRAMES_PER_KEY
    tracks: list[KeyframeTrack] = field(default_factory=list)
    semantic: list[tuple[int, tuple[int, int]]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.fps < 1:
            raise ValueError("fps must be >= 1")
        if self.frames_per_key < 1:
            raise ValueError("frames_per_key must be >= 1")

    @property
    def total_frames(self) -> int:
        return max((t.keys[-1][0] for t in self.tracks if t.keys), default=0)

    def track(self, target: str, channel: str, create: bool = False) -> KeyframeTrack:
        for t in self.tracks:
            if t.target == target and t.channel == channel:
                return t
        if not create:
            raise KeyError(f"no track for {target}/{channel}")
        t = KeyframeTrack(target=target, channel=channel)
        self.tracks.append(t)
        return t


# ---------------------------------------------------------------------------
# Action dispatch table (overridable)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RotationRule:
    """Which bone(s) an action rotates, about which axis, with what sign.

    ``mirror_sides`` flips the sign on the right side so the two sides move
    symmetrically. ``oscillate`` emits the out/back/out triple of keys.
    """

    targets: tuple[str, ...]
    axis: int
    sign: float
    mirror_sides: bool = False
    oscillate: bool = False
    default_degrees: float | None = None

    def sign_for(self, side: str | None) -> float:
        if self.mirror_sides and side == "right":
            return -self.sign
        return self.sign


@dataclass(frozen=True)
class TranslationRule:
    """Marker: the action translates the armature root."""


# Axis conventions: 0 = x (lateral), 1 = y (depth, the facing axis),
# 2 = z (vertical). Raising a left limb must swing it up from +x toward +z,
# which is a negative rotation about y; the right side mirrors.
DEFAULT_ACTION_TABLE: dict[tuple[str, str], RotationRule | TranslationRule] = {
    ("hand", "raise"): RotationRule(("{side}_shoulder",), axis=1, sign=-1.0, mirror_sides=True),
    ("hand", "put_down"): RotationRule(("{side}_shoulder",), axis=1, sign=1.0, mirror_sides=True),
    ("hand", "wave"): RotationRule(
        ("{side}_forearm",), axis=1, sign=-1.0, mirror_sides=True, oscillate=True
    ),
    ("forearm", "raise"): RotationRule(("{side}_forearm",), axis=1, sign=-1.0, mirror_sides=True),
    ("forearm", "put_down"): RotationRule(("{side}_forearm",), axis=1, sign=1.0, mirror_sides=True),
    ("forearm", "wave"): RotationRule(
        ("{side}_forearm",), axis=1, sign=-1.0, mirror_sides=True, oscillate=True
    ),
    ("head", "raise"): RotationRule(("head",), axis=0, sign=1.0),
    ("head", "bow"): RotationRule(("head",), axis=0, sign=-1.0),
    ("head", "shake"): RotationRule(("head",), axis=2, sign=1.0, oscillate=True),
    ("head", "look_left"): RotationRule(("head", "neck"), axis=2, sign=1.0),
    ("head", "look_right"): RotationRule(("head", "neck"), axis=2, sign=-1.0),
    ("body", "turn_left"): RotationRule(
        ("waist",), axis=2, sign=1.0, default_degrees=TURN_DEFAULT_DEGREES
    ),
    ("body", "turn_right"): RotationRule(
        ("waist",), axis=2, sign=-1.0, default_degrees=TURN_DEFAULT_DEGREES
    ),
    ("leg", "lift"): RotationRule(("{side}_hip",), axis=0, sign=1.0),
    ("leg", "put_down"): RotationRule(("{side}_hip",), axis=0, sign=-1.0),
    ("calf", "lift"): RotationRule(("{side}_calf",), axis=0, sign=1.0),
    ("calf", "put_down"): RotationRule(("{side}_calf",), axis=0, sign=-1.0),
    ("body", "move"): TranslationRule(),
    ("body", "walk"): TranslationRule(),
    ("body", "run"): TranslationRule(),
}


def _with_axis(value: Vec3, axis: int, delta: float) -> Vec3:
    out = list(value)
    out[axis] += delta
    return tuple(out)


def apply_action(
    doc: AnimationDoc,
    spec: ActionSpec,
    cursor: AnimateResult,
    table: dict[tuple[str, str], RotationRule | TranslationRule] | None = None,
) -> AnimateResult:
    """Append the keys for one action starting after the cursor.

    Rotations add to the target bone's last keyed pose, so repeating an
    action accumulates. Zero-degree rotations still key (the pose repeats),
    which is what keeps frame counting stable for null actions. Returns the
    advanced cursor.
    """
    rule = (table or DEFAULT_ACTION_TABLE).get((spec.part, spec.action))
    if rule is None:
        raise ValueError(f"no animation rule for {spec.part}/{spec.action}")
    step_frames = doc.frames_per_key
    base = cursor.last_frame

    if isinstance(rule, TranslationRule):
        if spec.direction is None:
            raise ValueError("translation needs a direction")
        axis = _AXIS_INDEX[spec.direction[1]]
        sign = -1.0 if spec.direction[0] == "-" else 1.0
        step = STEP_HEIGHT_FRACTION * doc.armature.height
        track = doc.track(ROOT_TARGET, LOCATION_CHANNEL, create=True)
        value = track.last_value()
        for i in range(1, spec.count + 1):
            track.add_key(base + i * step_frames, _with_axis(value, axis, i * sign * step))
        emitted = spec.count
    else:
        degrees = spec.degrees
        if degrees == UNSET_DEGREES:
            if rule.default_degrees is None:
                raise ValueError(
                    f"{spec.part}/{spec.action} reached apply time with no angle"
                )
            degrees = rule.default_degrees
        delta = math.radians(degrees) * rule.sign_for(spec.side)
        for target_template in rule.targets:
            target = target_template.format(side=spec.side)
            doc.armature.bone(target)  # unknown bone -> KeyError
            track = doc.track(target, ROTATION_CHANNEL, create=True)
            start_value = track.last_value()
            out_value = _with_axis(start_value, rule.axis, delta)
            if rule.oscillate:
                track.add_key(base + step_frames, out_value)
                track.add_key(base + 2 * step_frames, start_value)
                track.add_key(base + 3 * step_frames, out_value)
            else:
                track.add_key(base + step_frames, out_value)
        emitted = 3 if rule.oscillate else 1

    doc.semantic.append((base + step_frames, spec.span))
    last = base + emitted * step_frames
    return AnimateResult(last_frame=last, all_frames=max(cursor.all_frames, last))


def build_animation(
    armature: Armature,
    specs: list[ActionSpec],
    fps: int = DEFAULT_FPS,
    frames_per_key: int = DEFAULT_FRAMES_PER_KEY,
    table: dict[tuple[str, str], RotationRule | TranslationRule] | None = None,
) -> AnimationDoc:
    """Fold apply_action over the specs in order, starting at frame zero."""
    doc = AnimationDoc(armature=armature, fps=fps, frames_per_key=frames_per_key)
    cursor = AnimateResult()
    for spec in specs:
        cursor = apply_action(doc, spec, cursor, table=table)
    return doc


# ---------------------------------------------------------------------------
# Neutral JSON export
# ---------------------------------------------------------------------------


def animation_to_doc(doc: AnimationDoc) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "fps": doc.fps,
        "frames_per_key": doc.frames_per_key,
        "total_frames": doc.total_frames,
        "armature": armature_to_doc(doc.armature),
        "tracks": [
            {
                "target": t.target,
                "channel": t.channel,
                "keys": [[frame, list(value)] for frame, value in t.keys],
            }
            for t in doc.tracks
        ],
        "semantic": [[frame, list(span)] for frame, span in doc.semantic],
    }


def neutral_json_bytes(doc: AnimationDoc) -> bytes:
    """Canonical JSON bytes: sorted keys, two-space indent, trailing newline.

    Floats print as their shortest round-trip decimal (json uses repr), so
    the same document always serializes to the same bytes.
    """
    text = json.dumps(animation_to_doc(doc), sort_keys=True, indent=2)
    return (text + "\n").encode("utf-8")


def export_neutral(doc: AnimationDoc, path: str | Path) -> None:
    Path(path).write_bytes(neutral_json_bytes(doc))


def load_animation_doc(path: str | Path) -> AnimationDoc:
    """Read a neutral JSON document back; validates version and key order."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {version!r}")
    doc = AnimationDoc(
        armature=armature_from_doc(raw["armature"]),
        fps=int(raw["fps"]),
        frames_per_key=int(raw["frames_per_key"]),
    )
    for track_doc in raw["tracks"]:
        track = doc.track(track_doc["target"], track_doc["channel"], create=True)
        for frame, value in track_doc["keys"]:
            track.add_key(int(frame), tuple(float(v) for v in value))
    doc.semantic = [
        (int(frame), (int(span[0]), int(span[1]))) for frame, span in raw["semantic"]
    ]
    if int(raw["total_frames"]) != doc.total_frames:
        raise ValueError("total_frames disagrees with the stored tracks")
    return doc


# ---------------------------------------------------------------------------
# BVH export
# ---------------------------------------------------------------------------


def _fmt(value: float) -> str:
    return repr(float(value))


def _bvh_hierarchy(armature: Armature) -> tuple[list[str], list[str]]:
    """The HIERARCHY text and the joint order used for MOTION columns."""
    children: dict[str | None, list[str]] = {}
    for bone in armature.bones:  # creation order fixes sibling order
        children.setdefault(bone.parent, []).append(bone.name)
    by_name = armature.bones_by_name

    lines: list[str] = ["HIERARCHY"]
    joint_order: list[str] = []

    def emit(name: str, parent: str | None, depth: int) -> None:
        indent = "  " * depth
        bone = by_name[name]
        if parent is None:
            lines.append(f"{indent}ROOT {name}")
            offset = bone.head
            channels = "6 Xposition Yposition Zposition Zrotation Xrotation Yrotation"
        else:
            lines.append(f"{indent}JOINT {name}")
            parent_bone = by_name[parent]
            offset = tuple(h - p for h, p in zip(bone.head, parent_bone.head))
            channels = "3 Zrotation Xrotation Yrotation"
        lines.append(f"{indent}{{")
        inner = "  " * (depth + 1)
        lines.append(
            f"{inner}OFFSET {_fmt(offset[0])} {_fmt(offset[1])} {_fmt(offset[2])}"
        )
        lines.append(f"{inner}CHANNELS {channels}")
        joint_order.append(name)
        for child in children.get(name, []):
            emit(child, name, depth + 1)
        if not children.get(name):
            tail_offset = tuple(t - h for t, h in zip(bone.tail, bone.head))
            lines.append(f"{inner}End Site")
            lines.append(f"{inner}{{")
            lines.append(
                f"{inner}  OFFSET {_fmt(tail_offset[0])} {_fmt(tail_offset[1])} "
                f"{_fmt(tail_offset[2])}"
            )
            lines.append(f"{inner}}}")
        lines.append(f"{indent}}}")

    root = children[None][0]
    emit(root, None, 0)
    return lines, joint_order


def export_bvh(doc: AnimationDoc, path: str | Path) -> None:
    """Write the animation as BVH with step-hold sampling.

    Every joint carries Zrotation Xrotation Yrotation channels (the root
    also carries positions). Frame f in 1..total_frames takes, per track,
    the latest key at or before f; rotations are radians converted to
    degrees, so keyed angles read back exactly.
    """
    lines, joint_order = _bvh_hierarchy(doc.armature)

    rotation_tracks = {
        t.target: t for t in doc.tracks if t.channel == ROTATION_CHANNEL
    }
    location_track = next(
        (t for t in doc.tracks if t.target == ROOT_TARGET and t.channel == LOCATION_CHANNEL),
        None,
    )
    # Waist rotations drive the root joint's rotation channels.
    total = doc.total_frames
    lines.append("MOTION")
    lines.append(f"Frames: {total}")
    lines.append(f"Frame Time: {_fmt(1.0 / doc.fps)}")
    for frame in range(1, total + 1):
        values: list[str] = []
        for index, name in enumerate(joint_order):
            if index == 0:
                pos = location_track.value_at(frame) if location_track else (0.0, 0.0, 0.0)
                values += [_fmt(pos[0]), _fmt(pos[1]), _fmt(pos[2])]
            track = rotation_tracks.get(name)
            euler = track.value_at(frame) if track else (0.0, 0.0, 0.0)
            values += [
                _fmt(math.degrees(euler[2])),
                _fmt(math.degrees(euler[0])),
                _fmt(math.degrees(euler[1])),
            ]
        lines.append(" ".join(values))
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
