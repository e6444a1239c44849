"""Command line entry point, usable both standalone and under Blender.

Blender forwards everything after a literal `--` to the script, so both of
these invocations parse the same way:

    blender --background --python -m blender_bridge -- --doc anim.json ...
    python -m blender_bridge --doc anim.json ...
"""

from __future__ import annotations

import argparse
import sys

from .errors import BridgeError
from .replay import BridgeJob, replay


def _script_args(argv: list[str]) -> list[str]:
    if "--" in argv:
        return argv[argv.index("--") + 1 :]
    return argv


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="blender_bridge", description="Replay a neutral animation document."
    )
    parser.add_argument("--doc", required=True, help="neutral animation JSON")
    parser.add_argument("--mesh", help="OBJ or glTF mesh to bind to the armature")
    parser.add_argument("--blend", help="write the scene to this .blend file")
    parser.add_argument("--video", help="render the animation to this file")
    args = parser.parse_args(_script_args(sys.argv[1:] if argv is None else argv))

    job = BridgeJob(
        doc_path=args.doc,
        mesh_path=args.mesh,
        blend_path=args.blend,
        video_path=args.video,
        render_video=bool(args.video),
    )
    try:
        result = replay(job)
    except BridgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(
        f"replayed {len(result.bone_names)} bones, "
        f"{sum(result.keyframe_counts.values())} keys"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
