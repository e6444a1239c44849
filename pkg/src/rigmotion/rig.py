"""Self-adapting armature construction from 2D keypoints.

Model space is right-handed: x lateral (left limbs extrude toward +x),
y depth, z up. The rest pose is planar (every joint at y = 0); image x maps
to model x and image y (down) maps to model z (up) with the sign flipped.
Lengths scale by units_per_pixel, the armature-units-per-image-pixel ratio.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .contour import ScaleSolution
from .errors import ConfigError, KeypointError
from .keypoints import KEYPOINT_NAMES, KeypointSet, Point, bone_segments, derive_keypoints

Vec3 = tuple[float, float, float]

SCHEMA_VERSION = 1

# Creation order: spine chain root-to-tip, then left before right, arms
# before legs, parents always before children.
BONE_ORDER = (
    "waist",
    "belly",
    "chest",
    "neck",
    "head",
    "left_shoulder",
    "left_upper_arm",
    "left_forearm",
    "right_shoulder",
    "right_upper_arm",
    "right_forearm",
    "left_hip",
    "left_thigh",
    "left_calf",
    "right_hip",
    "right_thigh",
    "right_calf",
)

BONE_PARENTS: dict[str, str | None] = {
    "waist": None,
    "belly": "waist",
    "chest": "belly",
    "neck": "chest",
    "head": "neck",
    "left_shoulder": "chest",
    "left_upper_arm": "left_shoulder",
    "left_forearm": "left_upper_arm",
    "right_shoulder": "chest",
    "right_upper_arm": "right_shoulder",
    "right_forearm": "right_upper_arm",
    "left_hip": "waist",
    "left_thigh": "left_hip",
    "left_calf": "left_thigh",
    "right_hip": "waist",
    "right_thigh": "right_hip",
    "right_calf": "right_thigh",
}

# The five connected chains: within each, a child's head sits on its
# parent's tail.
CHAINS = (
    ("waist", "belly", "chest", "neck", "head"),
    ("left_shoulder", "left_upper_arm", "left_forearm"),
    ("right_shoulder", "right_upper_arm", "right_forearm"),
    ("left_hip", "left_thigh", "left_calf"),
    ("right_hip", "right_thigh", "right_calf"),
)


def _bone_direction(name: str) -> str:
    if name.startswith("left_"):
        return "left"
    if name.startswith("right_"):
        return "right"
    return "axial"


@dataclass(frozen=True)
class RigScaling:
    """Armature scaling: units per pixel plus the torso and head proportions.

    ``torso_units`` is the waist-to-neck length in armature units that the
    scale was solved from. neck_factor and head_factor size the neck and
    head bones as multiples of the neck-to-mouth pixel distance.
    """

    units_per_pixel: float
    torso_units: float = 1.0
    neck_factor: float = 1.0
    head_factor: float = 1.5

    def __post_init__(self) -> None:
        for name in ("units_per_pixel", "torso_units", "neck_factor", "head_factor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")


def resolve_scaling(
    kp: KeypointSet,
    scale: ScaleSolution | None = None,
    torso_units: float = 1.0,
    neck_factor: float = 1.0,
    head_factor: float = 1.5,
) -> RigScaling:
    """Pick the armature scale.

    With a contour ScaleSolution available its pixels-per-unit ratio wins:
    units_per_pixel is its reciprocal and torso_units is solved from it.
    Otherwise the torso is pinned to ``torso_units`` (default 1.0) and
    units_per_pixel = torso_units / waist-to-neck pixel distance.
    """
    full = kp if all(kp.has(n) for n in KEYPOINT_NAMES) else derive_keypoints(kp)
    neck, waist = full["neck"], full["waist"]
    torso_pixels = math.dist(neck, waist)
    if torso_pixels <= 0:
        raise KeypointError("waist-to-neck pixel distance is zero")
    if scale is not None:
        units_per_pixel = 1.0 / scale.pixels_per_unit
        torso_units = units_per_pixel * torso_pixels
    else:
        units_per_pixel = torso_units / torso_pixels
    return RigScaling(
        units_per_pixel=units_per_pixel,
        torso_units=torso_units,
        neck_factor=neck_factor,
        head_factor=head_factor,
    )


@dataclass(frozen=True)
class ExtrudeStep:
    """One bone extrusion: image endpoints and the model-space offset."""

    start: Point
    end: Point
    direction: str  # "left", "right", or "axial"
    value: Vec3

    def __post_init__(self) -> None:
        if self.direction not in ("left", "right", "axial"):
            raise ValueError(f"unknown direction {self.direction!r}")
        if self.value[1] != 0.0:
            raise ValueError("extrusion depth must stay 0 (planar rest pose)")


def extrude_value(
    start: Point, end: Point, direction: str, units_per_pixel: float
) -> ExtrudeStep:
    """Model-space extrusion offset for a bone drawn between image points.

    Lateral offset = pixel dx * scale; vertical offset = -pixel dy * scale
    (image y grows down, model z grows up). Left bones force the lateral
    offset positive, right bones negative, axial bones keep its sign.
    """
    lateral = (end[0] - start[0]) * units_per_pixel
    vertical = -(end[1] - start[1]) * units_per_pixel
    if direction == "left":
        lateral = abs(lateral)
    elif direction == "right":
        lateral = -abs(lateral)
    return ExtrudeStep(
        start=(float(start[0]), float(start[1])),
        end=(float(end[0]), float(end[1])),
        direction=direction,
        value=(lateral, 0.0, vertical),
    )


@dataclass(frozen=True)
class BoneSpec:
    """One armature bone: tree link, rest geometry, and source metrics."""

    name: str
    parent: str | None
    head: Vec3
    tail: Vec3
    pixel_length: float
    rest_angle: float  # radians in the model x-z plane

    @property
    def length(self) -> float:
        return math.dist(self.head, self.tail)


@dataclass(frozen=True)
class Placement:
    """A world location assembled from box centering plus the tau nudge."""

    location: Vec3 = (0.0, 0.0, 0.0)
    tau: Vec3 = (0.0, 0.0, 0.0)


ORIGIN_PLACEMENT = Placement()


@dataclass(frozen=True)
class Armature:
    """The 17-bone armature plus the placement and scaling it was built with."""

    bones: tuple[BoneSpec, ...]
    placement: Placement
    scaling: RigScaling

    def __post_init__(self) -> None:
        names = [b.name for b in self.bones]
        if sorted(names) != sorted(BONE_ORDER):
            raise ValueError("armature must contain exactly the 17 canonical bones")

    def bone(self, name: str) -> BoneSpec:
        for b in self.bones:
            if b.name == name:
                return b
        raise KeyError(name)

    @property
    def bones_by_name(self) -> dict[str, BoneSpec]:
        return {b.name: b for b in self.bones}

    def joint_positions(self) -> list[Vec3]:
        """Distinct joint positions (bone heads and tails), creation order."""
        seen: dict[Vec3, None] = {}
        for b in self.bones:
            seen.setdefault(b.head)
            seen.setdefault(b.tail)
        return list(seen)

    @property
    def height(self) -> float:
        zs = [p[2] for p in self.joint_positions()]
        return max(zs) - min(zs)


def bone_pixel_lengths(kp: KeypointSet, scaling: RigScaling) -> dict[str, float]:
    """Image-pixel length of every bone segment.

    The armature-unit length of a bone is this value times units_per_pixel;
    neck and head lengths come from the neck-to-mouth distance scaled by
    their factors (that scaling is already baked into the segment table).
    """
    segs = bone_segments(kp, p_neck=scaling.neck_factor, p_head=scaling.head_factor)
    return {name: math.dist(start, end) for name, (start, end) in segs.items()}


def build_armature(
    kp: KeypointSet,
    scaling: RigScaling,
    placement: Placement = ORIGIN_PLACEMENT,
) -> Armature:
    """Extrude the 17 bones from the keypoint skeleton.

    The root (waist) head sits at placement.location; every further bone is
    one extrusion from its attachment joint, so within each chain a child's
    head coincides with its parent's tail exactly.
    """
    full = kp if all(kp.has(n) for n in KEYPOINT_NAMES) else derive_keypoints(kp)
    segs = bone_segments(full, p_neck=scaling.neck_factor, p_head=scaling.head_factor)

    heads: dict[str, Vec3] = {}
    tails: dict[str, Vec3] = {}
    bones: list[BoneSpec] = []
    root = tuple(float(v) for v in placement.location)

    for name in BONE_ORDER:
        parent = BONE_PARENTS[name]
        if parent is None:
            head = root
        elif name in ("left_hip", "right_hip"):
            head = heads[parent]  # pelvis bones hang from the waist root joint
        else:
            head = tails[parent]
        start, end = segs[name]
        step = extrude_value(start, end, _bone_direction(name), scaling.units_per_pixel)
        tail = (head[0] + step.value[0], head[1] + step.value[1], head[2] + step.value[2])
        heads[name] = head
        tails[name] = tail
        bones.append(
            BoneSpec(
                name=name,
                parent=parent,
                head=head,
                tail=tail,
                pixel_length=math.dist(start, end),
                rest_angle=math.atan2(step.value[2], step.value[0]),
            )
        )
    return Armature(bones=tuple(bones), placement=placement, scaling=scaling)


# ---------------------------------------------------------------------------
# Model bounds and placement (the mesh side)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelBounds3D:
    """Axis-aligned model bounds as min/max corners plus a per-axis scale."""

    min_corner: Vec3
    max_corner: Vec3
    scale: Vec3 = (1.0, 1.0, 1.0)

    def __post_init__(self) -> None:
        if any(hi < lo for lo, hi in zip(self.min_corner, self.max_corner)):
            raise ValueError("max_corner must dominate min_corner")
        if any(s <= 0 for s in self.scale):
            raise ValueError("scale components must be > 0")

    @property
    def extents(self) -> Vec3:
        """Scaled (x, y, z) extent of the box."""
        return tuple(
            (hi - lo) * s
            for lo, hi, s in zip(self.min_corner, self.max_corner, self.scale)
        )


def model_placement(bounds: ModelBounds3D, tau: Vec3 = (0.0, 0.0, 0.0)) -> Placement:
    """World location for the mesh: centered laterally and in depth, lifted
    half its height, each component nudged additively by tau."""
    sx, sy, sz = bounds.scale
    x_center = (bounds.max_corner[0] + bounds.min_corner[0]) / 2.0 * sx
    y_center = (bounds.max_corner[1] + bounds.min_corner[1]) / 2.0 * sy
    z_extent = (bounds.max_corner[2] - bounds.min_corner[2]) * sz
    location = (x_center + tau[0], y_center + tau[1], z_extent / 2.0 + tau[2])
    return Placement(location=location, tau=tuple(float(t) for t in tau))


def load_model_bounds(path: str | Path) -> ModelBounds3D:
    """Read {"min": [x,y,z], "max": [x,y,z], "scale": [x,y,z]?} JSON."""
    p = Path(path)
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
        min_corner = tuple(float(v) for v in doc["min"])
        max_corner = tuple(float(v) for v in doc["max"])
        scale = tuple(float(v) for v in doc.get("scale", (1.0, 1.0, 1.0)))
    except FileNotFoundError as exc:
        raise ConfigError(f"{p}: file not found") from exc
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{p}: invalid model bounds ({exc})") from exc
    if len(min_corner) != 3 or len(max_corner) != 3 or len(scale) != 3:
        raise ConfigError(f"{p}: min/max/scale must each have 3 components")
    return ModelBounds3D(min_corner=min_corner, max_corner=max_corner, scale=scale)


def overlap_score(armature: Armature, bounds: ModelBounds3D, placement: Placement) -> float:
    """Fraction of armature joints inside the placed model box.

    The box is centered on placement.location with the scaled extents;
    boundary contact counts as inside.
    """
    ex, ey, ez = bounds.extents
    cx, cy, cz = placement.location
    lo = (cx - ex / 2.0, cy - ey / 2.0, cz - ez / 2.0)
    hi = (cx + ex / 2.0, cy + ey / 2.0, cz + ez / 2.0)
    joints = armature.joint_positions()
    inside = sum(
        1
        for j in joints
        if all(lo[i] <= j[i] <= hi[i] for i in range(3))
    )
    return inside / len(joints)


# ---------------------------------------------------------------------------
# Armature JSON document
# ---------------------------------------------------------------------------


def armature_to_doc(armature: Armature) -> dict:
    """Plain-JSON form of an armature (bones, placement, scaling)."""
    return {
        "schema_version": SCHEMA_VERSION,
        "bones": [
            {
                "name": b.name,
                "parent": b.parent,
                "head": list(b.head),
                "tail": list(b.tail),
            }
            for b in armature.bones
        ],
        "placement": {
            "location": list(armature.placement.location),
            "tau": list(armature.placement.tau),
        },
        "scaling": {"units_per_pixel": armature.scaling.units_per_pixel},
    }


def armature_from_doc(doc: dict) -> Armature:
    bones = tuple(
        BoneSpec(
            name=bone["name"],
            parent=bone["parent"],
            head=tuple(float(v) for v in bone["head"]),
            tail=tuple(float(v) for v in bone["tail"]),
            pixel_length=float(bone.get("pixel_length", 0.0)),
            rest_angle=float(bone.get("rest_angle", 0.0)),
        )
        for bone in doc["bones"]
    )
    placement = Placement(
        location=tuple(float(v) for v in doc["placement"]["location"]),
        tau=tuple(float(v) for v in doc["placement"]["tau"]),
    )
    scaling = RigScaling(units_per_pixel=float(doc["scaling"]["units_per_pixel"]))
    return Armature(bones=bones, placement=placement, scaling=scaling)
