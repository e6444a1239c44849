"""Gradient-based object bounds and pixel scaling."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigmotion.contour import BoundsReport, ContourConfig, find_bounds, scale_from_bounds
from rigmotion.errors import NoForegroundError
from rigmotion.raster import RasterImage

from conftest import square_on_white


def brute_force_bbox(img: RasterImage, bg=(255, 255, 255)) -> tuple[int, int, int, int]:
    """Inclusive bbox of every non-background pixel."""
    mask = ~np.all(img.data[:, :, :3] == bg, axis=2)
    ys, xs = np.nonzero(mask)
    return int(xs.min()), int(ys.min()), int(xs.max()), int(ys.max())


def test_black_square_bounds_within_one_pixel(black_square):
    bounds = find_bounds(black_square, ContourConfig())
    x0, y0, x1, y1 = brute_force_bbox(black_square)
    assert abs(bounds.x_min - x0) <= 1
    assert abs(bounds.y_min - y0) <= 1
    assert abs(bounds.x_max - x1) <= 1
    assert abs(bounds.y_max - y1) <= 1
    # thresholded blur grows the box exactly one pixel outward on each side
    assert (bounds.x_min, bounds.y_min, bounds.x_max, bounds.y_max) == (21, 21, 42, 42)


def test_bounds_sizes_are_inclusive(black_square):
    bounds = find_bounds(black_square, ContourConfig())
    assert bounds.pixel_width == bounds.x_max - bounds.x_min + 1
    assert bounds.pixel_height == bounds.y_max - bounds.y_min + 1


def test_translation_equivariance():
    a = square_on_white(size=96, lo=20, hi=40)
    b = square_on_white(size=96, lo=41, hi=61)  # same square moved +21 on both axes
    ba = find_bounds(a, ContourConfig())
    bb = find_bounds(b, ContourConfig())
    assert (bb.x_min, bb.y_min, bb.x_max, bb.y_max) == (
        ba.x_min + 21,
        ba.y_min + 21,
        ba.x_max + 21,
        ba.y_max + 21,
    )
    assert ba.shifted(21, 21) == bb


def test_largest_component_wins():
    data = np.full((80, 80, 4), 255, dtype=np.uint8)
    data[10:20, 10:20, :3] = 0    # 10x10 blob
    data[40:70, 40:70, :3] = 0    # 30x30 blob, the object
    img = RasterImage(data)
    bounds = find_bounds(img, ContourConfig())
    x0, y0, x1, y1 = 40, 40, 69, 69
    assert abs(bounds.x_min - x0) <= 1 and abs(bounds.y_min - y0) <= 1
    assert abs(bounds.x_max - x1) <= 1 and abs(bounds.y_max - y1) <= 1


def test_equal_components_tie_breaks_topmost_then_leftmost():
    data = np.full((80, 80, 4), 255, dtype=np.uint8)
    data[50:60, 10:20, :3] = 0    # lower-left
    data[10:20, 50:60, :3] = 0    # upper-right, same size: smaller y_min wins
    img = RasterImage(data)
    bounds = find_bounds(img, ContourConfig())
    assert bounds.y_min <= 20


def test_object_bbox_contained_within_reported_bounds(black_square):
    bounds = find_bounds(black_square, ContourConfig())
    x0, y0, x1, y1 = brute_force_bbox(black_square)
    assert bounds.x_min <= x0 and bounds.y_min <= y0
    assert bounds.x_max >= x1 and bounds.y_max >= y1


def test_uniform_image_raises():
    img = RasterImage(np.full((32, 32, 4), 255, dtype=np.uint8))
    with pytest.raises(NoForegroundError):
        find_bounds(img, ContourConfig())


def test_transparent_pixels_read_black():
    # an all-transparent white image still has no gradient anywhere
    data = np.full((32, 32, 4), 255, dtype=np.uint8)
    data[:, :, 3] = 0
    with pytest.raises(NoForegroundError):
        find_bounds(RasterImage(data), ContourConfig())
    # but an opaque object on transparent background is found by its edge
    data[10:20, 10:20, 3] = 255
    bounds = find_bounds(RasterImage(data), ContourConfig())
    assert abs(bounds.x_min - 10) <= 1 and abs(bounds.x_max - 19) <= 1


def test_scale_from_bounds_height_rule():
    bounds = BoundsReport(x_min=0, y_min=0, x_max=49, y_max=99)  # 50 x 100 px
    sol = scale_from_bounds(bounds, model_height=2.0, model_width=1.0)
    assert sol.pixels_per_unit == pytest.approx(50.0)
    assert sol.model_height == 2.0
    assert sol.model_width == 1.0


def test_scale_width_consistency_diagnostic():
    bounds = BoundsReport(x_min=0, y_min=0, x_max=49, y_max=99)
    sol = scale_from_bounds(bounds, model_height=2.0, model_width=1.0)
    # pixel aspect 0.5 matches model aspect 0.5 exactly
    assert sol.width_consistency == pytest.approx(0.0, abs=1e-12)
    skewed = scale_from_bounds(bounds, model_height=2.0, model_width=2.0)
    assert skewed.width_consistency > 0.0


def test_scale_logs_width_disagreement(caplog):
    bounds = BoundsReport(x_min=0, y_min=0, x_max=99, y_max=99)
    with caplog.at_level("INFO", logger="rigmotion.contour"):
        scale_from_bounds(bounds, model_height=4.0, model_width=1.0)
    assert any("width-derived" in r.message for r in caplog.records)


@settings(max_examples=50, deadline=None)
@given(
    height=st.integers(2, 500).map(lambda n: n * 8),
    model_height=st.floats(0.125, 64),
    k_exp=st.integers(-3, 3),
)
def test_power_of_two_scaling_is_float_exact(height, model_height, k_exp):
    """Doubling or halving the pixel extent scales the solution exactly.

    Powers of two only shift the float exponent, so the proportionality
    holds with == rather than approx.
    """
    k = 2.0**k_exp
    base = BoundsReport(0, 0, 9, height - 1)
    scaled = BoundsReport(0, 0, 9, int(height * k) - 1)
    a = scale_from_bounds(base, model_height=model_height, model_width=1.0)
    b = scale_from_bounds(scaled, model_height=model_height, model_width=1.0)
    assert b.pixels_per_unit == a.pixels_per_unit * k
