"""Object bounds from gradient contours, and the pixels-per-unit scale.

find_bounds locates the largest high-gradient blob; scale_from_bounds turns
its pixel height plus a known model height into a pixels-per-model-unit
ratio. Pixel bounds are inclusive on both ends.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import NoForegroundError
from .raster import RasterImage, grayscale

log = logging.getLogger(__name__)

_EIGHT = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class ContourConfig:
    """Gradient, blur, and binarization settings for bounds detection."""

    blur_kernel: int = 3
    binarize_threshold: float = 50.0
    gradient_mode: str = "sum_abs"  # or "euclidean"

    def __post_init__(self) -> None:
        if self.blur_kernel < 1 or self.blur_kernel % 2 == 0:
            raise ValueError("blur_kernel must be odd and >= 1")
        if not 0 <= self.binarize_threshold <= 255:
            raise ValueError("binarize_threshold must be in 0..255")
        if self.gradient_mode not in ("sum_abs", "euclidean"):
            raise ValueError("gradient_mode must be 'sum_abs' or 'euclidean'")


@dataclass(frozen=True)
class BoundsReport:
    """Inclusive pixel bounds of the detected object plus its extents."""

    x_min: int
    y_min: int
    x_max: int
    y_max: int

    def __post_init__(self) -> None:
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError("bounds are inverted")

    @property
    def pixel_width(self) -> int:
        return self.x_max - self.x_min + 1

    @property
    def pixel_height(self) -> int:
        return self.y_max - self.y_min + 1

    def shifted(self, dx: int, dy: int) -> "BoundsReport":
        return BoundsReport(
            self.x_min + dx, self.y_min + dy, self.x_max + dx, self.y_max + dy
        )


@dataclass(frozen=True)
class ScaleSolution:
    """Pixels-per-model-unit ratio and the model extents it came from.

    ``width_consistency`` is |pixel aspect - model aspect|, a diagnostic for
    how well the width agrees with the height-derived scale; it is not an
    error signal by itself.
    """

    pixels_per_unit: float
    model_height: float
    model_width: float
    width_consistency: float

    def __post_init__(self) -> None:
        if self.pixels_per_unit <= 0:
            raise ValueError("pixels_per_unit must be > 0")


def _central_gradient(gray: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Central differences (f(x+1) - f(x-1)) / 2 with a replicated border."""
    padded = np.pad(gray.astype(np.float64), 1, mode="edge")
    gx = (padded[1:-1, 2:] - padded[1:-1, :-2]) / 2.0
    gy = (padded[2:, 1:-1] - padded[:-2, 1:-1]) / 2.0
    return gx, gy


def _box_blur(values: np.ndarray, kernel: int) -> np.ndarray:
    if kernel == 1:
        return values
    pad = kernel // 2
    padded = np.pad(values, pad, mode="edge")
    summed = np.cumsum(np.cumsum(padded, axis=0), axis=1)
    summed = np.pad(summed, ((1, 0), (1, 0)))
    h, w = values.shape
    total = (
        summed[kernel : kernel + h, kernel : kernel + w]
        - summed[kernel : kernel + h, 0:w]
        - summed[0:h, kernel : kernel + w]
        + summed[0:h, 0:w]
    )
    return total / float(kernel * kernel)


def find_bounds(img: RasterImage, cfg: ContourConfig | None = None) -> BoundsReport:
    """Bounding box of the largest high-gradient connected component.

    Grayscale -> central-difference gradients -> magnitude -> box blur ->
    binarize -> 8-connected labeling -> largest component by pixel count.
    Equal counts break toward the smaller y_min, then the smaller x_min.
    """
    cfg = cfg or ContourConfig()
    gray = grayscale(img)
    gx, gy = _central_gradient(gray)
    if cfg.gradient_mode == "euclidean":
        magnitude = np.hypot(gx, gy)
    else:
        magnitude = np.abs(gx) + np.abs(gy)
    blurred = _box_blur(magnitude, cfg.blur_kernel)
    binary = blurred > cfg.binarize_threshold

    if not binary.any():
        raise NoForegroundError("no foreground gradients above the threshold")

    labels, count = ndimage.label(binary, structure=_EIGHT)
    best: tuple[int, int, int] | None = None  # (-size, y_min, x_min)
    best_index = 0
    for index in range(1, count + 1):
        rows, cols = np.nonzero(labels == index)
        key = (-rows.size, int(rows.min()), int(cols.min()))
        if best is None or key < best:
            best = key
            best_index = index
    rows, cols = np.nonzero(labels == best_index)
    return BoundsReport(
        x_min=int(cols.min()),
        y_min=int(rows.min()),
        x_max=int(cols.max()),
        y_max=int(rows.max()),
    )


def scale_from_bounds(
    bounds: BoundsReport, model_height: float, model_width: float
) -> ScaleSolution:
    """Pixels per model unit from the object's pixel height and model height.

    pixels_per_unit = pixel_height / model_height. The width ratio is
    reported as a consistency diagnostic: |pixel aspect - model aspect|.
    """
    if model_height <= 0 or model_width <= 0:
        raise ValueError("model extents must be > 0")
    if bounds.pixel_height <= 0:
        raise ValueError("bounds have no pixel height")
    width_scale = bounds.pixel_width / model_width  # diagnostic path only
    height_scale = bounds.pixel_height / model_height
    width_consistency = abs(
        bounds.pixel_width / bounds.pixel_height - model_width / model_height
    )
    if abs(width_scale - height_scale) / height_scale > 0.25:
        log.info(
            "width-derived scale %.4f differs from height-derived %.4f",
            width_scale,
            height_scale,
        )
    return ScaleSolution(
        pixels_per_unit=height_scale,
        model_height=model_height,
        model_width=model_width,
        width_consistency=width_consistency,
    )
