"""Named 2D body keypoints and the derivation of the missing ones.

Image coordinates: x grows right, y grows down, units are pixels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import KeypointError

Point = tuple[float, float]

# Points a KeypointSet must carry once derivation has run.
KEYPOINT_NAMES = (
    "nose",
    "mouth",
    "neck",
    "waist",
    "left_shoulder",
    "right_shoulder",
    "left_elbow",
    "right_elbow",
    "left_wrist",
    "right_wrist",
    "left_hip",
    "right_hip",
    "left_knee",
    "right_knee",
    "left_ankle",
    "right_ankle",
)

# Points that derive_keypoints can synthesize when absent.
_DERIVABLE = ("neck", "waist", "mouth")

# Fraction of the nose->neck segment where the mouth sits.
MOUTH_FRACTION = 0.6


@dataclass(frozen=True)
class KeypointSet:
    """Named 2D points plus the source image size and per-point provenance.

    ``provenance[name]`` is "given" or "derived". Construction validates that
    every point lies inside [0, w] x [0, h].
    """

    points: dict[str, Point]
    image_size: tuple[int, int]
    provenance: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        w, h = self.image_size
        if w < 1 or h < 1:
            raise KeypointError("image_size must be positive")
        for name, (x, y) in self.points.items():
            if not (0 <= x <= w and 0 <= y <= h):
                raise KeypointError(
                    f"keypoint {name!r} at ({x}, {y}) is outside the {w}x{h} image"
                )

    def __getitem__(self, name: str) -> Point:
        try:
            return self.points[name]
        except KeyError as exc:
            raise KeypointError(f"keypoint {name!r} is missing") from exc

    def has(self, name: str) -> bool:
        return name in self.points


def _midpoint(a: Point, b: Point) -> Point:
    return ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)


def _lerp(a: Point, b: Point, t: float) -> Point:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def derive_keypoints(kp: KeypointSet) -> KeypointSet:
    """Fill in neck, waist, and mouth when absent; flag them as derived.

    neck  = midpoint of the shoulders
    waist = midpoint of the hips
    mouth = nose + 0.6 * (neck - nose)

    Requires both shoulders and both hips; requires the nose when the mouth
    must be synthesized. The result carries every name in KEYPOINT_NAMES and
    keeps |neck - waist| > 0.
    """
    for required in ("left_shoulder", "right_shoulder", "left_hip", "right_hip"):
        if not kp.has(required):
            raise KeypointError(f"cannot derive torso points without {required!r}")

    points = dict(kp.points)
    provenance = dict(kp.provenance)
    for name in points:
        provenance.setdefault(name, "given")

    if "neck" not in points:
        points["neck"] = _midpoint(points["left_shoulder"], points["right_shoulder"])
        provenance["neck"] = "derived"
    if "waist" not in points:
        points["waist"] = _midpoint(points["left_hip"], points["right_hip"])
        provenance["waist"] = "derived"
    if "mouth" not in points:
        if "nose" not in points:
            raise KeypointError("cannot derive the mouth without a nose keypoint")
        points["mouth"] = _lerp(points["nose"], points["neck"], MOUTH_FRACTION)
        provenance["mouth"] = "derived"

    missing = [name for name in KEYPOINT_NAMES if name not in points]
    if missing:
        raise KeypointError(f"required keypoints missing after derivation: {missing}")

    neck, waist = points["neck"], points["waist"]
    if neck == waist:
        raise KeypointError("neck and waist coincide; torso has no length")

    return KeypointSet(points=points, image_size=kp.image_size, provenance=provenance)


def load_keypoints(path: str | Path) -> KeypointSet:
    """Read the documented JSON form: {"image_size": [w, h], "keypoints": {...}}.

    Unknown keypoint names are ignored; neck/waist/mouth may be omitted
    (derive_keypoints fills them in).
    """
    p = Path(path)
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise KeypointError(f"{p}: file not found") from exc
    except json.JSONDecodeError as exc:
        raise KeypointError(f"{p}: invalid JSON ({exc})") from exc

    try:
        w, h = doc["image_size"]
        raw = doc["keypoints"]
    except (KeyError, TypeError, ValueError) as exc:
        raise KeypointError(f"{p}: expected image_size and keypoints entries") from exc

    points: dict[str, Point] = {}
    for name, value in raw.items():
        if name not in KEYPOINT_NAMES:
            continue
        try:
            x, y = float(value[0]), float(value[1])
        except (TypeError, ValueError, IndexError) as exc:
            raise KeypointError(f"{p}: keypoint {name!r} is not an [x, y] pair") from exc
        points[name] = (x, y)

    return KeypointSet(points=points, image_size=(int(w), int(h)))


def bone_segments(
    kp: KeypointSet, p_neck: float = 1.0, p_head: float = 1.5
) -> dict[str, tuple[Point, Point]]:
    """Image-space (start, end) endpoints for each of the 17 armature bones.

    The torso between waist and neck splits into equal thirds for the waist,
    belly, and chest bones. The neck bone runs from the neck point along the
    neck->mouth direction for p_neck times that distance; the head bone
    continues p_head times further. Clavicles run neck->shoulder, pelvis
    bones waist->hip, limbs along their obvious keypoint pairs.
    """
    kp = kp if all(kp.has(n) for n in KEYPOINT_NAMES) else derive_keypoints(kp)
    waist, neck, mouth = kp["waist"], kp["neck"], kp["mouth"]
    up = (mouth[0] - neck[0], mouth[1] - neck[1])
    spine1 = _lerp(waist, neck, 1.0 / 3.0)
    spine2 = _lerp(waist, neck, 2.0 / 3.0)
    neck_top = (neck[0] + p_neck * up[0], neck[1] + p_neck * up[1])
    head_top = (neck_top[0] + p_head * up[0], neck_top[1] + p_head * up[1])

    segs: dict[str, tuple[Point, Point]] = {
        "waist": (waist, spine1),
        "belly": (spine1, spine2),
        "chest": (spine2, neck),
        "neck": (neck, neck_top),
        "head": (neck_top, head_top),
    }
    for side in ("left", "right"):
        segs[f"{side}_shoulder"] = (neck, kp[f"{side}_shoulder"])
        segs[f"{side}_upper_arm"] = (kp[f"{side}_shoulder"], kp[f"{side}_elbow"])
        segs[f"{side}_forearm"] = (kp[f"{side}_elbow"], kp[f"{side}_wrist"])
        segs[f"{side}_hip"] = (waist, kp[f"{side}_hip"])
        segs[f"{side}_thigh"] = (kp[f"{side}_hip"], kp[f"{side}_knee"])
        segs[f"{side}_calf"] = (kp[f"{side}_knee"], kp[f"{side}_ankle"])
    return segs
