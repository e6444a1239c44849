"""Write the synthetic sample inputs (figure.png, keypoints, command) to a dir."""

import argparse
from pathlib import Path

from rigmotion.synth import write_sample_inputs


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", nargs="?", default="sample", type=Path)
    args = parser.parse_args()
    paths = write_sample_inputs(args.out_dir)
    for path in paths:
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
