"""Synthetic demo inputs: a stick figure image, keypoints, and a command.

Used by the bundled sample (scripts/make_sample.py), the README walkthrough,
and the test-suite fixtures. Everything here is deterministic.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from .raster import RasterImage

SAMPLE_WIDTH = 96
SAMPLE_HEIGHT = 128

BACKGROUND_COLOR = (90, 120, 150)
FIGURE_COLOR = (235, 200, 160)

# A demo command exercising eight sub-commands, four per body side.
SAMPLE_COMMAND = (
    "The object raises his left hand 0 degrees, raises his right hand 0 degrees, "
    "raises his left hand 30 degrees, raises his right hand 30 degrees, "
    "raises lifts left leg 0 degrees, raises lifts right leg 0 degrees, "
    "raises lifts left leg 30 degrees, puts down right leg 30 degrees."
)


def sample_keypoints() -> dict:
    """Keypoints matching the drawn figure; neck/waist/mouth left implicit."""
    return {
        "image_size": [SAMPLE_WIDTH, SAMPLE_HEIGHT],
        "keypoints": {
            "nose": [48, 22],
            "left_shoulder": [62, 40],
            "right_shoulder": [34, 40],
            "left_elbow": [72, 58],
            "right_elbow": [24, 58],
            "left_wrist": [78, 74],
            "right_wrist": [18, 74],
            "left_hip": [56, 78],
            "right_hip": [40, 78],
            "left_knee": [58, 100],
            "right_knee": [38, 100],
            "left_ankle": [58, 120],
            "right_ankle": [38, 120],
        },
    }


def sample_image() -> RasterImage:
    """The stick figure on a uniform background, drawn from the keypoints."""
    im = Image.new("RGBA", (SAMPLE_WIDTH, SAMPLE_HEIGHT), BACKGROUND_COLOR + (255,))
    draw = ImageDraw.Draw(im)
    kp = sample_keypoints()["keypoints"]

    def seg(a: str, b: str, width: int = 7) -> None:
        draw.line([tuple(kp[a]), tuple(kp[b])], fill=FIGURE_COLOR + (255,), width=width)

    neck = ((kp["left_shoulder"][0] + kp["right_shoulder"][0]) // 2,
            (kp["left_shoulder"][1] + kp["right_shoulder"][1]) // 2)
    waist = ((kp["left_hip"][0] + kp["right_hip"][0]) // 2,
             (kp["left_hip"][1] + kp["right_hip"][1]) // 2)

    # torso block plus limbs
    draw.polygon(
        [tuple(kp["left_shoulder"]), tuple(kp["right_shoulder"]),
         tuple(kp["right_hip"]), tuple(kp["left_hip"])],
        fill=FIGURE_COLOR + (255,),
    )
    draw.line([neck, waist], fill=FIGURE_COLOR + (255,), width=9)
    seg("left_shoulder", "left_elbow")
    seg("left_elbow", "left_wrist")
    seg("right_shoulder", "right_elbow")
    seg("right_elbow", "right_wrist")
    seg("left_hip", "left_knee", width=8)
    seg("left_knee", "left_ankle", width=8)
    seg("right_hip", "right_knee", width=8)
    seg("right_knee", "right_ankle", width=8)
    # head disc above the nose
    draw.ellipse([48 - 10, 8, 48 + 10, 28], fill=FIGURE_COLOR + (255,))

    return RasterImage(np.asarray(im, dtype=np.uint8))


def sample_model_bounds() -> dict:
    """A symmetric 1 x 0.5 x 2 box standing on the ground plane."""
    return {"min": [-0.5, -0.25, 0.0], "max": [0.5, 0.25, 2.0], "scale": [1, 1, 1]}


def write_sample_inputs(directory: str | Path) -> dict[str, Path]:
    """Write figure.png, keypoints.json, model_bounds.json, and command.txt.

    Returns the created paths keyed by artifact name.
    """
    from .raster import save_image

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "image": directory / "figure.png",
        "keypoints": directory / "keypoints.json",
        "model_bounds": directory / "model_bounds.json",
        "command": directory / "command.txt",
    }
    save_image(sample_image(), paths["image"])
    paths["keypoints"].write_text(
        json.dumps(sample_keypoints(), indent=2) + "\n", encoding="utf-8"
    )
    paths["model_bounds"].write_text(
        json.dumps(sample_model_bounds(), indent=2) + "\n", encoding="utf-8"
    )
    paths["command"].write_text(SAMPLE_COMMAND + "\n", encoding="utf-8")
    return paths
