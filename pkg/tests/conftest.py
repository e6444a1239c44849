"""Shared fixtures plus a pass/fail summary line per acceptance criterion."""

import numpy as np
import pytest

from rigmotion.keypoints import KeypointSet, derive_keypoints
from rigmotion.raster import RasterImage
from rigmotion.synth import sample_keypoints, write_sample_inputs

_acceptance_results: dict[str, bool] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and "test_acceptance" in item.nodeid:
        _acceptance_results[item.name] = report.passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for name, ok in _acceptance_results.items():
        terminalreporter.write_line(f"  {name}: {'PASS' if ok else 'FAIL'}")


@pytest.fixture(scope="session")
def sample_dir(tmp_path_factory):
    """Synthetic figure.png + keypoints.json + command.txt + model_bounds.json."""
    d = tmp_path_factory.mktemp("sample")
    write_sample_inputs(d)
    return d


@pytest.fixture(scope="session")
def sample_kp() -> KeypointSet:
    """The sample figure's keypoints, fully derived."""
    raw = sample_keypoints()
    return derive_keypoints(
        KeypointSet(
            points={k: tuple(map(float, v)) for k, v in raw["keypoints"].items()},
            image_size=tuple(raw["image_size"]),
        )
    )


def square_on_white(size: int = 64, lo: int = 22, hi: int = 42) -> RasterImage:
    """Black square [lo, hi) on a white size x size canvas."""
    data = np.full((size, size, 4), 255, dtype=np.uint8)
    data[lo:hi, lo:hi, :3] = 0
    return RasterImage(data)


@pytest.fixture
def black_square() -> RasterImage:
    """The 20x20-square-on-64x64 edge/contour fixture."""
    return square_on_white()
