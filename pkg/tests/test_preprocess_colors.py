"""Modal color-group background removal against a brute-force histogram oracle."""

from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigmotion.preprocess import ColorGroupConfig, color_groups, remove_background_color_groups
from rigmotion.raster import RasterImage


def modal_colors_oracle(img: RasterImage, n: int) -> list[tuple[int, int, int]]:
    """Top-n colors by exact count, ties toward the smaller (r, g, b)."""
    counts = Counter(
        tuple(int(v) for v in px[:3]) for row in img.data for px in row
    )
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [color for color, _ in ranked[:n]]


def image_from_array(rows) -> RasterImage:
    arr = np.asarray(rows, dtype=np.uint8)
    rgba = np.dstack([arr, np.full(arr.shape[:2], 255, dtype=np.uint8)])
    return RasterImage(rgba)


def checker(bg, fg, size=16) -> RasterImage:
    """bg everywhere except a fg block smaller than half the image."""
    data = np.zeros((size, size, 3), dtype=np.uint8)
    data[:, :] = bg
    data[2 : size // 2, 2 : size // 2] = fg
    return image_from_array(data)


def test_top_group_matches_brute_force_mode():
    img = checker(bg=(90, 120, 150), fg=(10, 20, 30))
    [group] = color_groups(img, ColorGroupConfig(group_count=1))
    assert group.representative == modal_colors_oracle(img, 1)[0]
    # with zero tolerance the members are exactly the pixels of that color
    flat = img.data[:, :, :3].reshape(-1, 3)
    expected = {i for i, px in enumerate(flat) if tuple(px) == group.representative}
    assert group.member_mask == expected
    assert group.member_pixel_count == len(expected)


def test_two_groups_match_brute_force_ranking():
    data = np.zeros((8, 8, 3), dtype=np.uint8)
    data[:4] = (200, 0, 0)   # 32 px
    data[4:6] = (0, 200, 0)  # 16 px
    data[6:] = (0, 0, 200)   # 16 px, ties with green; smaller tuple wins
    img = image_from_array(data)
    groups = color_groups(img, ColorGroupConfig(group_count=2))
    assert [g.representative for g in groups] == modal_colors_oracle(img, 2)
    assert groups[0].representative == (200, 0, 0)
    assert groups[1].representative == (0, 0, 200)


def test_tie_breaks_toward_smaller_rgb():
    data = np.zeros((2, 2, 3), dtype=np.uint8)
    data[0] = (5, 5, 5)
    data[1] = (4, 200, 200)  # same count; smaller r
    img = image_from_array(data)
    [group] = color_groups(img, ColorGroupConfig(group_count=1))
    assert group.representative == (4, 200, 200)


def test_tolerance_merges_near_colors():
    data = np.zeros((4, 4, 3), dtype=np.uint8)
    data[:, :] = (100, 100, 100)
    data[0, 0] = (102, 99, 101)   # inside +/- (2, 1, 1)
    data[0, 1] = (103, 100, 100)  # outside (r off by 3)
    img = image_from_array(data)
    [group] = color_groups(img, ColorGroupConfig(group_count=1, tolerance=(2, 1, 1)))
    assert group.representative == (100, 100, 100)
    assert group.member_pixel_count == 15  # all but the (103,100,100) pixel
    removed = remove_background_color_groups(img, ColorGroupConfig(1, (2, 1, 1)))
    assert removed.data[0, 1, 3] == 255
    assert removed.data[0, 0, 3] == 0


def test_removal_clears_alpha_only():
    img = checker(bg=(90, 120, 150), fg=(10, 20, 30))
    out = remove_background_color_groups(img, ColorGroupConfig())
    assert np.array_equal(out.data[:, :, :3], img.data[:, :, :3])
    bg_mask = np.all(img.data[:, :, :3] == (90, 120, 150), axis=2)
    assert (out.data[:, :, 3][bg_mask] == 0).all()
    assert (out.data[:, :, 3][~bg_mask] == 255).all()


def test_removal_is_idempotent():
    img = checker(bg=(90, 120, 150), fg=(10, 20, 30))
    cfg = ColorGroupConfig(group_count=2, tolerance=(1, 1, 1))
    once = remove_background_color_groups(img, cfg)
    twice = remove_background_color_groups(once, cfg)
    assert np.array_equal(once.data, twice.data)


def test_fewer_colors_than_groups_warns(caplog):
    img = checker(bg=(1, 2, 3), fg=(4, 5, 6))
    with caplog.at_level("WARNING", logger="rigmotion.preprocess"):
        groups = color_groups(img, ColorGroupConfig(group_count=5))
    assert len(groups) == 2
    assert any("fewer" in r.message for r in caplog.records)


def test_config_validation():
    with pytest.raises(ValueError):
        ColorGroupConfig(group_count=0)
    with pytest.raises(ValueError):
        ColorGroupConfig(tolerance=(-1, 0, 0))


@settings(max_examples=40, deadline=None)
@given(
    pixels=st.lists(
        st.tuples(
            st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)
        ),
        min_size=4,
        max_size=36,
    ),
    n=st.integers(1, 3),
)
def test_membership_invariant_matches_oracle(pixels, n):
    """Every selected-group pixel goes transparent; every other pixel is kept."""
    side = int(np.ceil(np.sqrt(len(pixels))))
    padded = pixels + [(0, 0, 0)] * (side * side - len(pixels))
    data = np.asarray(padded, dtype=np.uint8).reshape(side, side, 3)
    img = image_from_array(data)
    cfg = ColorGroupConfig(group_count=n)
    out = remove_background_color_groups(img, cfg)
    top = set(modal_colors_oracle(img, min(n, len({tuple(p) for p in padded}))))
    for i, px in enumerate(data.reshape(-1, 3)):
        expected = 0 if tuple(int(v) for v in px) in top else 255
        assert out.data.reshape(-1, 4)[i, 3] == expected
    assert np.array_equal(out.data[:, :, :3], img.data[:, :, :3])
