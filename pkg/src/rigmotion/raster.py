"""RGBA raster images and PNG I/O.

Pixels are kept in a (height, width, 4) uint8 array, row-major, channels
r, g, b, a in 0..255. All pipeline operations treat images as immutable
values and return new instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ImageLoadError

# ITU-R BT.601 luma weights, rounded to the nearest integer intensity.
_LUMA = (0.299, 0.587, 0.114)


@dataclass(frozen=True)
class RasterImage:
    """An RGBA image; ``data`` has shape (height, width, 4), dtype uint8."""

    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.ndim != 3 or self.data.shape[2] != 4:
            raise ValueError("RasterImage data must have shape (h, w, 4)")
        if self.data.dtype != np.uint8:
            raise ValueError("RasterImage data must be uint8")
        if self.data.shape[0] < 1 or self.data.shape[1] < 1:
            raise ValueError("RasterImage dimensions must be at least 1x1")

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def pixels(self) -> list[tuple[int, int, int, int]]:
        """Row-major (r, g, b, a) tuples. Convenience for tests and small images."""
        flat = self.data.reshape(-1, 4)
        return [tuple(int(c) for c in px) for px in flat]

    def pixel(self, x: int, y: int) -> tuple[int, int, int, int]:
        r, g, b, a = self.data[y, x]
        return int(r), int(g), int(b), int(a)

    @classmethod
    def from_pixels(
        cls, width: int, height: int, pixels: list[tuple[int, int, int, int]]
    ) -> "RasterImage":
        if len(pixels) != width * height:
            raise ValueError("pixel count does not match width*height")
        arr = np.asarray(pixels, dtype=np.uint8).reshape(height, width, 4)
        return cls(arr)

    def replace_alpha(self, alpha: np.ndarray) -> "RasterImage":
        """New image with the same RGB and the given (h, w) uint8 alpha plane."""
        out = self.data.copy()
        out[:, :, 3] = alpha
        return RasterImage(out)


def grayscale(img: RasterImage) -> np.ndarray:
    """Integer luma plane, shape (h, w) uint8.

    intensity = round(0.299 r + 0.587 g + 0.114 b); fully transparent pixels
    read as 0 so removed backgrounds do not re-enter later stages.
    """
    rgb = img.data[:, :, :3].astype(np.float64)
    luma = _LUMA[0] * rgb[:, :, 0] + _LUMA[1] * rgb[:, :, 1] + _LUMA[2] * rgb[:, :, 2]
    out = np.rint(luma).astype(np.uint8)
    out[img.data[:, :, 3] == 0] = 0
    return out


def load_image(path: str | Path) -> RasterImage:
    """Load a PNG file as RGBA. Raises ImageLoadError on unreadable input."""
    p = Path(path)
    try:
        with Image.open(p) as im:
            if (im.format or "").upper() != "PNG":
                raise ImageLoadError(f"{p}: unsupported format {im.format!r}, expected PNG")
            rgba = im.convert("RGBA")
            arr = np.asarray(rgba, dtype=np.uint8)
    except FileNotFoundError as exc:
        raise ImageLoadError(f"{p}: file not found") from exc
    except UnidentifiedImageError as exc:
        raise ImageLoadError(f"{p}: not a readable image") from exc
    except OSError as exc:
        raise ImageLoadError(f"{p}: {exc}") from exc
    return RasterImage(arr)


def save_image(img: RasterImage, path: str | Path) -> None:
    Image.fromarray(img.data, mode="RGBA").save(Path(path), format="PNG")
