"""Background removal: color groups, convolution edge loops, and trunk boxes.

All three methods only ever flip alpha from opaque to transparent; RGB values
are never touched, so each method is safe to re-run and safe to chain.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from scipy import ndimage

from .errors import KeypointError
from .keypoints import KEYPOINT_NAMES, KeypointSet, Point, bone_segments, derive_keypoints
from .raster import RasterImage, grayscale

log = logging.getLogger(__name__)

Cell = tuple[int, int]  # (row, col) on the compressed grid


# ---------------------------------------------------------------------------
# Method 1: modal color groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ColorGroupConfig:
    """Settings for modal-color background removal.

    ``group_count`` is how many of the most frequent exact colors seed groups;
    ``tolerance`` is the per-channel +/- merge radius around each seed.
    """

    group_count: int = 1
    tolerance: tuple[int, int, int] = (0, 0, 0)

    def __post_init__(self) -> None:
        if self.group_count < 1:
            raise ValueError("group_count must be >= 1")
        if len(self.tolerance) != 3 or any(t < 0 for t in self.tolerance):
            raise ValueError("tolerance must be three values >= 0")


@dataclass(frozen=True)
class ColorGroup:
    """One background color group: its seed color and member pixels."""

    representative: tuple[int, int, int]
    member_pixel_count: int
    member_mask: frozenset[int]  # row-major pixel indices

    def __post_init__(self) -> None:
        if self.member_pixel_count != len(self.member_mask):
            raise ValueError("member_pixel_count disagrees with member_mask")


def color_groups(img: RasterImage, cfg: ColorGroupConfig) -> list[ColorGroup]:
    """The top-n exact-color groups, widened by the per-channel tolerance.

    Tie between equally frequent colors breaks toward the smaller (r, g, b)
    tuple so the result is deterministic. Groups may overlap.
    """
    rgb = img.data[:, :, :3].reshape(-1, 3).astype(np.int64)
    packed = (rgb[:, 0] << 16) | (rgb[:, 1] << 8) | rgb[:, 2]
    colors, counts = np.unique(packed, return_counts=True)

    n = cfg.group_count
    if len(colors) < n:
        log.warning(
            "image has %d distinct colors, fewer than the %d requested groups",
            len(colors),
            n,
        )
        n = len(colors)

    # Sort by descending count, then ascending packed color.
    order = np.lexsort((colors, -counts))
    seeds = colors[order[:n]]

    groups: list[ColorGroup] = []
    tol = np.asarray(cfg.tolerance, dtype=np.int64)
    for seed in seeds:
        rep = (int(seed >> 16) & 0xFF, int(seed >> 8) & 0xFF, int(seed) & 0xFF)
        member = np.all(np.abs(rgb - np.asarray(rep, dtype=np.int64)) <= tol, axis=1)
        idx = np.flatnonzero(member)
        groups.append(
            ColorGroup(
                representative=rep,
                member_pixel_count=int(idx.size),
                member_mask=frozenset(int(i) for i in idx),
            )
        )
    return groups


def remove_background_color_groups(img: RasterImage, cfg: ColorGroupConfig) -> RasterImage:
    """Make every pixel of the top-n color groups fully transparent.

    RGB is preserved, so the exact-color histogram, and therefore this
    operation, is stable under repetition (idempotent).
    """
    groups = color_groups(img, cfg)
    flat_alpha = img.data[:, :, 3].reshape(-1).copy()
    for group in groups:
        if group.member_mask:
            flat_alpha[np.fromiter(group.member_mask, dtype=np.int64)] = 0
    return img.replace_alpha(flat_alpha.reshape(img.height, img.width))


# ---------------------------------------------------------------------------
# Method 2: convolution edge loops
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeConfig:
    """Settings for the five-sample convolution edge detector.

    The detector samples the four corners and the center of each kernel
    window over a zero-padded grayscale image, weighs samples by ``on_value``,
    counts samples >= ``sample_threshold``, and keeps cells whose count
    exceeds ``vote_threshold`` as candidates. Candidate cells whose 4-way
    intensity contrast exceeds ``contrast_threshold`` become edge cells.
    Edge gaps shorter than ``gap_distance`` cells get bridged, then chains
    that do not close into a loop, or are shorter than ``min_loop_length``,
    are dropped.
    """

    kernel_size: int = 3
    stride: int = 1
    padding: int = 1
    on_value: int = 255
    sample_threshold: float = 128.0 * 255.0
    vote_threshold: int = 2
    contrast_threshold: float = 40.0
    gap_distance: float = 3.0
    min_loop_length: int = 12

    def __post_init__(self) -> None:
        if self.kernel_size < 1 or self.kernel_size % 2 == 0:
            raise ValueError("kernel_size must be odd and >= 1")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")
        if self.padding < 0:
            raise ValueError("padding must be >= 0")
        if self.on_value <= 0:
            raise ValueError("on_value must be > 0")
        if self.sample_threshold < 0 or self.contrast_threshold < 0:
            raise ValueError("thresholds must be >= 0")
        if not (0 <= self.vote_threshold <= self.kernel_size * self.kernel_size):
            raise ValueError("vote_threshold out of range for the kernel")
        if self.gap_distance < 0:
            raise ValueError("gap_distance must be >= 0")
        if self.min_loop_length < 0:
            raise ValueError("min_loop_length must be >= 0")


@dataclass(frozen=True)
class EdgeLoop:
    """A closed edge chain: its cells and the grid cells it encloses."""

    cells: frozenset[Cell]
    enclosed: frozenset[Cell]

    @property
    def area(self) -> int:
        return len(self.enclosed)


@dataclass(frozen=True, eq=False)
class EdgeMap:
    """Result of edge detection on the compressed grid.

    ``candidate_set`` (bright cells), its complement ``rejected_set``, the
    pre-filter ``raw_edge_set``, and the final ``edge_set`` (cells of the
    surviving closed loops). ``loops`` is sorted by enclosed area, largest
    first.
    """

    grid_width: int
    grid_height: int
    candidate_set: frozenset[Cell]
    raw_edge_set: frozenset[Cell]
    edge_set: frozenset[Cell]
    loops: tuple[EdgeLoop, ...]
    config: EdgeConfig

    @property
    def rejected_set(self) -> frozenset[Cell]:
        every = {(r, c) for r in range(self.grid_height) for c in range(self.grid_width)}
        return frozenset(every - self.candidate_set)


def _bresenham(a: Cell, b: Cell) -> list[Cell]:
    """Integer grid cells strictly between a and b on the discrete line."""
    r0, c0 = a
    r1, c1 = b
    dr, dc = abs(r1 - r0), abs(c1 - c0)
    sr = 1 if r1 > r0 else -1
    sc = 1 if c1 > c0 else -1
    err = dr - dc
    cells: list[Cell] = []
    r, c = r0, c0
    while True:
        e2 = 2 * err
        if e2 > -dc:
            err -= dc
            r += sr
        if e2 < dr:
            err += dr
            c += sc
        if (r, c) == (r1, c1):
            break
        cells.append((r, c))
    return cells


def _bridge_gaps(edge: np.ndarray, max_dist: float) -> np.ndarray:
    """Connect edge cells split by a small gap along one row or column.

    Two edge cells bridge when they share a row or a column, are not
    8-adjacent, and their Euclidean distance is below max_dist. The cells
    between them are marked. Diagonal near-pairs never bridge: at a right-
    angle corner they would fill cells on the object side of the loop.
    """
    if max_dist <= 0:
        return edge
    out = edge.copy()
    cells = sorted(map(tuple, np.argwhere(edge)))
    cell_set = set(cells)
    reach = int(math.ceil(max_dist))
    for r, c in cells:
        # each unordered pair is visited once, from its top/left end
        for gap in range(2, reach + 1):
            if gap >= max_dist:
                break
            if (r, c + gap) in cell_set:
                for cell in _bresenham((r, c), (r, c + gap)):
                    out[cell] = True
            if (r + gap, c) in cell_set:
                for cell in _bresenham((r, c), (r + gap, c)):
                    out[cell] = True
    return out


_EIGHT = np.ones((3, 3), dtype=bool)


def _enclosed_cells(component: np.ndarray) -> np.ndarray:
    """Cells unreachable from the grid border when the component blocks travel.

    Flood fill runs 4-connected on the complement, the standard dual of the
    8-connected component, so diagonal joints in the loop do not leak.
    """
    free = ~component
    labels, _ = ndimage.label(free, structure=np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]]))
    border_labels = np.unique(
        np.concatenate([labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]])
    )
    border_labels = border_labels[border_labels != 0]
    return free & ~np.isin(labels, border_labels)


def detect_edges(img: RasterImage, cfg: EdgeConfig) -> EdgeMap:
    """Run the five-sample detector and keep only closed edge loops."""
    gray = grayscale(img).astype(np.int64)
    h, w = gray.shape
    k, s, p = cfg.kernel_size, cfg.stride, cfg.padding
    grid_h = (h - k + 2 * p) // s + 1
    grid_w = (w - k + 2 * p) // s + 1
    if grid_h < 1 or grid_w < 1:
        raise ValueError(f"kernel {k}x{k} larger than the padded {w}x{h} image")

    padded = np.pad(gray, p, mode="constant", constant_values=0)
    offsets = ((0, 0), (0, k - 1), (k - 1, 0), (k - 1, k - 1), (k // 2, k // 2))
    votes = np.zeros((grid_h, grid_w), dtype=np.int64)
    for dy, dx in offsets:
        sample = padded[dy : dy + grid_h * s : s, dx : dx + grid_w * s : s]
        votes += (sample * cfg.on_value >= cfg.sample_threshold).astype(np.int64)
    candidates = votes > cfg.vote_threshold

    # Grid intensity is the center sample; 4-way contrast marks edge cells.
    center = padded[k // 2 : k // 2 + grid_h * s : s, k // 2 : k // 2 + grid_w * s : s]
    contrast = np.zeros((grid_h, grid_w), dtype=bool)
    diff = np.abs(np.diff(center.astype(np.float64), axis=0)) > cfg.contrast_threshold
    contrast[:-1, :] |= diff
    contrast[1:, :] |= diff
    diff = np.abs(np.diff(center.astype(np.float64), axis=1)) > cfg.contrast_threshold
    contrast[:, :-1] |= diff
    contrast[:, 1:] |= diff
    raw_edges = candidates & contrast

    bridged = _bridge_gaps(raw_edges, cfg.gap_distance)
    candidates = candidates | bridged  # bridge fills stay candidates too

    labels, count = ndimage.label(bridged, structure=_EIGHT)
    loops: list[EdgeLoop] = []
    for index in range(1, count + 1):
        component = labels == index
        size = int(component.sum())
        if size < cfg.min_loop_length:
            continue
        enclosed = _enclosed_cells(component)
        if not enclosed.any():
            continue  # open chain: fails the closed-loop test
        loops.append(
            EdgeLoop(
                cells=frozenset(map(tuple, np.argwhere(component))),
                enclosed=frozenset(map(tuple, np.argwhere(enclosed))),
            )
        )
    loops.sort(key=lambda lp: (-lp.area, min(lp.cells)))

    final = frozenset().union(*(lp.cells for lp in loops)) if loops else frozenset()
    return EdgeMap(
        grid_width=grid_w,
        grid_height=grid_h,
        candidate_set=frozenset(map(tuple, np.argwhere(candidates))),
        raw_edge_set=frozenset(map(tuple, np.argwhere(bridged))),
        edge_set=final,
        loops=tuple(loops),
        config=cfg,
    )


def _pixel_to_cell(coord: np.ndarray, size: int, cfg: EdgeConfig) -> np.ndarray:
    """Nearest compressed-grid index for each pixel coordinate along one axis."""
    cell = np.rint((coord + cfg.padding - cfg.kernel_size // 2) / cfg.stride).astype(int)
    return np.clip(cell, 0, size - 1)


def remove_background_edges(img: RasterImage, edges: EdgeMap) -> RasterImage:
    """Make everything outside the largest closed edge loop transparent.

    Pixels whose grid cell lies in the loop's enclosed interior keep their
    alpha; all others (the loop cells included, since they sit on the bright
    background side of the boundary) go transparent. Without any closed loop
    the image is returned unchanged with a warning.
    """
    if not edges.loops:
        log.warning("no closed edge loop found; image left unchanged")
        return img

    keep_cells = np.zeros((edges.grid_height, edges.grid_width), dtype=bool)
    rows = np.fromiter((c[0] for c in edges.loops[0].enclosed), dtype=int)
    cols = np.fromiter((c[1] for c in edges.loops[0].enclosed), dtype=int)
    keep_cells[rows, cols] = True

    ys = _pixel_to_cell(np.arange(img.height), edges.grid_height, edges.config)
    xs = _pixel_to_cell(np.arange(img.width), edges.grid_width, edges.config)
    keep = keep_cells[np.ix_(ys, xs)]

    alpha = img.data[:, :, 3].copy()
    alpha[~keep] = 0
    return img.replace_alpha(alpha)


# ---------------------------------------------------------------------------
# Method 3: trunk boxes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrunkConfig:
    """Trunk-box settings: box width, end extension, head box length factor.

    ``part_widths`` overrides the base width per bone name. The head box
    length is head_box_multiplier times the neck-to-mouth distance; values
    far outside 3..6 usually clip badly, so straying logs a warning.
    """

    width: float = 24.0
    extension: float = 0.0
    head_box_multiplier: float = 4.0
    part_widths: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.width <= 0:
            raise ValueError("width must be > 0")
        if self.extension < 0:
            raise ValueError("extension must be >= 0")
        if self.head_box_multiplier <= 0:
            raise ValueError("head_box_multiplier must be > 0")
        if not 3.0 <= self.head_box_multiplier <= 6.0:
            log.warning(
                "head_box_multiplier %.2f is outside the usual 3..6 range",
                self.head_box_multiplier,
            )
        for part, value in self.part_widths.items():
            if value <= 0:
                raise ValueError(f"part width for {part!r} must be > 0")

    def width_for(self, part: str) -> float:
        return float(self.part_widths.get(part, self.width))


@dataclass(frozen=True)
class TrunkBox:
    """An oriented rectangle around one bone segment.

    Corners are ordered (start side, start side, extended end side, extended
    end side); opposite sides must match in length, i.e. the corners form a
    real rectangle.
    """

    corners: tuple[Point, Point, Point, Point]

    def __post_init__(self) -> None:
        c0, c1, c2, c3 = (np.asarray(c, dtype=np.float64) for c in self.corners)
        width_a = np.linalg.norm(c1 - c0)
        width_b = np.linalg.norm(c3 - c2)
        len_a = np.linalg.norm(c2 - c0)
        len_b = np.linalg.norm(c3 - c1)
        if min(width_a, width_b, len_a, len_b) <= 0:
            raise ValueError("degenerate trunk box")
        if abs(width_a - width_b) > 1e-6 or abs(len_a - len_b) > 1e-6:
            raise ValueError("trunk box corners do not form a rectangle")

    def contains(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Vectorized point-in-rectangle test (boundary inclusive)."""
        c0 = np.asarray(self.corners[0], dtype=np.float64)
        u = np.asarray(self.corners[2], dtype=np.float64) - c0  # length axis
        v = np.asarray(self.corners[1], dtype=np.float64) - c0  # width axis
        px = xs - c0[0]
        py = ys - c0[1]
        along = px * u[0] + py * u[1]
        across = px * v[0] + py * v[1]
        eps = 1e-9
        return (
            (along >= -eps)
            & (along <= u @ u + eps)
            & (across >= -eps)
            & (across <= v @ v + eps)
        )


def trunk_box(start: Point, end: Point, cfg: TrunkConfig) -> TrunkBox:
    """Rectangle of cfg.width centered on start->end, extended cfg.extension
    beyond the end.

    Built from the unit direction and its +90-degree normal, so any segment
    orientation works, including axis-aligned ones.
    """
    sx, sy = float(start[0]), float(start[1])
    ex, ey = float(end[0]), float(end[1])
    dx, dy = ex - sx, ey - sy
    length = math.hypot(dx, dy)
    if length == 0:
        raise ValueError("zero-length bone segment has no trunk box")
    ux, uy = dx / length, dy / length
    nx, ny = -uy, ux  # direction rotated +90 degrees
    half = cfg.width / 2.0
    fx, fy = ex + cfg.extension * ux, ey + cfg.extension * uy
    return TrunkBox(
        corners=(
            (sx + half * nx, sy + half * ny),
            (sx - half * nx, sy - half * ny),
            (fx + half * nx, fy + half * ny),
            (fx - half * nx, fy - half * ny),
        )
    )


def trunk_boxes(kp: KeypointSet, cfg: TrunkConfig) -> dict[str, TrunkBox]:
    """One box per bone segment; neck and head merge into a single head box.

    Zero-length segments are skipped with a warning: their box would be
    meaningless and the neighboring boxes still cover the joint.
    """
    if not all(kp.has(name) for name in KEYPOINT_NAMES):
        kp = derive_keypoints(kp)
    segments = bone_segments(kp)
    neck = segments.pop("neck")[0]
    segments.pop("head")
    boxes: dict[str, TrunkBox] = {}
    for name, (seg_start, seg_end) in segments.items():
        seg_cfg = TrunkConfig(
            width=cfg.width_for(name),
            extension=cfg.extension,
            head_box_multiplier=cfg.head_box_multiplier,
        )
        try:
            boxes[name] = trunk_box(seg_start, seg_end, seg_cfg)
        except ValueError:
            log.warning("skipping zero-length bone segment %r", name)

    mouth = kp["mouth"]
    mouth_vec = (mouth[0] - neck[0], mouth[1] - neck[1])
    head_end = (
        neck[0] + cfg.head_box_multiplier * mouth_vec[0],
        neck[1] + cfg.head_box_multiplier * mouth_vec[1],
    )
    head_cfg = TrunkConfig(
        width=cfg.width_for("head"),
        extension=cfg.extension,
        head_box_multiplier=cfg.head_box_multiplier,
    )
    try:
        boxes["head"] = trunk_box(neck, head_end, head_cfg)
    except ValueError:
        log.warning("skipping zero-length head box")
    return boxes


def remove_background_trunks(
    img: RasterImage, kp: KeypointSet, cfg: TrunkConfig
) -> RasterImage:
    """Keep only pixels covered by the union of the trunk boxes.

    Boxes reaching past the image edge are effectively clipped: the kept
    mask lives on the pixel grid. Pixels already transparent stay so.
    """
    if kp.image_size != (img.width, img.height):
        raise KeypointError(
            f"keypoints are for a {kp.image_size} image, got {img.width}x{img.height}"
        )
    boxes = trunk_boxes(kp, cfg)
    ys, xs = np.mgrid[0 : img.height, 0 : img.width]
    keep = np.zeros((img.height, img.width), dtype=bool)
    for box in boxes.values():
        keep |= box.contains(xs.astype(np.float64), ys.astype(np.float64))
    alpha = img.data[:, :, 3].copy()
    alpha[~keep] = 0
    return img.replace_alpha(alpha)
