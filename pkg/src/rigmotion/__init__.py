"""rigmotion: one image plus 2D keypoints in, rigged keyframe animation out.

The package splits into five stages, each usable on its own:

- ``preprocess``: background removal (modal color groups, five-sample
  convolution edge loops, keypoint-aligned trunk boxes)
- ``contour``: gradient-based object bounds and pixel-to-unit scaling
- ``rig``: the 17-bone self-adaptive armature and model placement
- ``cmdlang``: text command scanning and quantization
- ``anim``: keyframe assembly, neutral JSON and BVH export

``cli`` ties the stages into the ``rigmotion`` command.
"""

from .anim import (
    AnimationDoc,
    KeyframeTrack,
    build_animation,
    export_bvh,
    export_neutral,
    load_animation_doc,
    neutral_json_bytes,
)
from .cmdlang import (
    ActionSpec,
    CommandItem,
    extract_commands,
    interpret,
    read_command_file,
    scan_commands,
    write_command_file,
)
from .contour import BoundsReport, ContourConfig, ScaleSolution, find_bounds, scale_from_bounds
from .errors import (
    CommandFileError,
    ConfigError,
    ImageLoadError,
    KeypointError,
    NoForegroundError,
    PipelineError,
)
from .keypoints import KEYPOINT_NAMES, KeypointSet, bone_segments, derive_keypoints, load_keypoints
from .preprocess import (
    ColorGroup,
    ColorGroupConfig,
    EdgeConfig,
    EdgeMap,
    TrunkBox,
    TrunkConfig,
    color_groups,
    detect_edges,
    remove_background_color_groups,
    remove_background_edges,
    remove_background_trunks,
    trunk_box,
    trunk_boxes,
)
from .raster import RasterImage, grayscale, load_image, save_image
from .rig import (
    BONE_ORDER,
    BONE_PARENTS,
    CHAINS,
    Armature,
    BoneSpec,
    ModelBounds3D,
    ORIGIN_PLACEMENT,
    Placement,
    RigScaling,
    armature_from_doc,
    armature_to_doc,
    build_armature,
    load_model_bounds,
    model_placement,
    overlap_score,
    resolve_scaling,
)

__version__ = "0.1.0"

__all__ = [
    "ActionSpec",
    "AnimationDoc",
    "Armature",
    "BONE_ORDER",
    "BONE_PARENTS",
    "BoneSpec",
    "BoundsReport",
    "CHAINS",
    "ColorGroup",
    "ColorGroupConfig",
    "CommandFileError",
    "CommandItem",
    "ConfigError",
    "ContourConfig",
    "EdgeConfig",
    "EdgeMap",
    "ImageLoadError",
    "KEYPOINT_NAMES",
    "KeyframeTrack",
    "KeypointError",
    "KeypointSet",
    "ModelBounds3D",
    "NoForegroundError",
    "ORIGIN_PLACEMENT",
    "PipelineError",
    "Placement",
    "RasterImage",
    "RigScaling",
    "ScaleSolution",
    "TrunkBox",
    "TrunkConfig",
    "bone_segments",
    "build_animation",
    "build_armature",
    "color_groups",
    "derive_keypoints",
    "detect_edges",
    "export_bvh",
    "export_neutral",
    "extract_commands",
    "find_bounds",
    "grayscale",
    "interpret",
    "armature_from_doc",
    "armature_to_doc",
    "load_animation_doc",
    "load_image",
    "load_keypoints",
    "load_model_bounds",
    "model_placement",
    "neutral_json_bytes",
    "overlap_score",
    "read_command_file",
    "remove_background_color_groups",
    "remove_background_edges",
    "remove_background_trunks",
    "resolve_scaling",
    "save_image",
    "scale_from_bounds",
    "scan_commands",
    "trunk_box",
    "trunk_boxes",
    "write_command_file",
]
