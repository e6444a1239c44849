"""Pipeline orchestration and the ``rigmotion`` command-line interface.

The pipeline runs preprocess -> contour -> rig -> command interpretation ->
animation, writes each artifact into the output directory, and finishes
with manifest.json listing every artifact with its sha256. Equal configs
and seeds produce byte-identical artifacts and manifests.

Exit codes: 0 success, 1 configuration/validation error, 2 stage failure.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click

from . import anim as anim_mod
from .anim import build_animation, export_bvh, export_neutral
from .cmdlang import extract_commands, interpret, read_command_file, write_command_file
from .contour import BoundsReport, ContourConfig, ScaleSolution, find_bounds, scale_from_bounds
from .errors import ConfigError, PipelineError
from .keypoints import KeypointSet, derive_keypoints, load_keypoints
from .preprocess import (
    ColorGroupConfig,
    EdgeConfig,
    TrunkConfig,
    detect_edges,
    remove_background_color_groups,
    remove_background_edges,
    remove_background_trunks,
)
from .raster import RasterImage, load_image, save_image
from .rig import (
    Armature,
    ModelBounds3D,
    ORIGIN_PLACEMENT,
    Placement,
    armature_to_doc,
    build_armature,
    load_model_bounds,
    model_placement,
    overlap_score,
    resolve_scaling,
)

CONFIG_ENV_VAR = "RIGMOTION_CONFIG"

BACKGROUND_METHODS = ("color", "edge", "trunk", "none")

MANIFEST_NAME = "manifest.json"


class StageFailure(PipelineError):
    """A pipeline stage failed; carries the stage name for the exit message."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[stage {stage}] {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class ExportToggles:
    neutral: bool = True
    bvh: bool = True
    command_txt: bool = True
    processed_png: bool = True


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one pipeline run needs; see README for the JSON schema."""

    image: str | None = None
    keypoints: str | None = None
    command: str | None = None
    command_file: str | None = None
    background: str = "color"
    seed: int = 0
    tau: tuple[float, float, float] = (0.0, 0.0, 0.0)
    output_dir: str = "out"
    model_bounds: str | None = None
    exports: ExportToggles = field(default_factory=ExportToggles)
    color: ColorGroupConfig = field(default_factory=ColorGroupConfig)
    edge: EdgeConfig = field(default_factory=EdgeConfig)
    trunk: TrunkConfig | None = None  # None -> adaptive per-part widths
    contour: ContourConfig = field(default_factory=ContourConfig)
    torso_units: float = 1.0
    neck_factor: float = 1.0
    head_factor: float = 1.5
    fps: int = anim_mod.DEFAULT_FPS
    frames_per_key: int = anim_mod.DEFAULT_FRAMES_PER_KEY

    def __post_init__(self) -> None:
        if self.background not in BACKGROUND_METHODS:
            raise ConfigError(f"unknown background method {self.background!r}")
        if len(self.tau) != 3:
            raise ConfigError("tau must have 3 components")


_NESTED_SECTIONS = {
    "exports": ExportToggles,
    "color": ColorGroupConfig,
    "edge": EdgeConfig,
    "trunk": TrunkConfig,
    "contour": ContourConfig,
}


def config_from_mapping(raw: dict) -> PipelineConfig:
    """Build a PipelineConfig from a JSON-shaped dict, rejecting unknown keys."""
    known = {f.name for f in dataclasses.fields(PipelineConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kwargs: dict = {}
    for key, value in raw.items():
        if key in _NESTED_SECTIONS and value is not None:
            section = _NESTED_SECTIONS[key]
            names = {f.name for f in dataclasses.fields(section)}
            bad = set(value) - names
            if bad:
                raise ConfigError(f"unknown keys in {key!r} section: {sorted(bad)}")
            value = dict(value)
            if key == "edge" or key == "color":
                for tuple_key in ("tolerance",):
                    if tuple_key in value:
                        value[tuple_key] = tuple(value[tuple_key])
            try:
                kwargs[key] = section(**value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad {key!r} section: {exc}") from exc
        elif key == "tau":
            kwargs[key] = tuple(float(v) for v in value)
        else:
            kwargs[key] = value
    try:
        return PipelineConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path) -> PipelineConfig:
    p = Path(path)
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"{p}: config file not found") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{p}: config root must be an object")
    return config_from_mapping(raw)


def _merged_config(config_path: str | None, overrides: dict) -> PipelineConfig:
    """Config file values first, command-line flags on top (flags win)."""
    path = config_path or os.environ.get(CONFIG_ENV_VAR)
    cfg = load_config(path) if path else PipelineConfig()
    cleaned = {k: v for k, v in overrides.items() if v is not None}
    if not cleaned:
        return cfg
    try:
        return dataclasses.replace(cfg, **cleaned)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------


def _read_command_text(cfg: PipelineConfig) -> str:
    if cfg.command is not None:
        return cfg.command
    if cfg.command_file:
        text = Path(cfg.command_file).read_text(encoding="utf-8")
        return text.removesuffix("\n")
    raise ConfigError("config needs either command text or a command file")


def _validate_inputs(cfg: PipelineConfig) -> None:
    if not cfg.image:
        raise ConfigError("config is missing the input image path")
    if not Path(cfg.image).is_file():
        raise ConfigError(f"image file not found: {cfg.image}")
    if not cfg.keypoints:
        raise ConfigError("config is missing the keypoints path")
    if not Path(cfg.keypoints).is_file():
        raise ConfigError(f"keypoints file not found: {cfg.keypoints}")
    if cfg.command is None and not cfg.command_file:
        raise ConfigError("config needs either command text or a command file")
    if cfg.command is None and not Path(cfg.command_file).is_file():
        raise ConfigError(f"command file not found: {cfg.command_file}")
    if cfg.model_bounds and not Path(cfg.model_bounds).is_file():
        raise ConfigError(f"model bounds file not found: {cfg.model_bounds}")


def _adaptive_trunk_config(kp: KeypointSet) -> TrunkConfig:
    """Per-part widths proportional to the torso length (waist to neck)."""
    import math

    full = derive_keypoints(kp)
    torso = math.dist(full["neck"], full["waist"])
    widths = {}
    for name in ("waist", "belly", "chest"):
        widths[name] = 1.2 * torso
    widths["head"] = 0.9 * torso
    return TrunkConfig(
        width=0.5 * torso,  # limbs and everything not overridden
        extension=0.15 * torso,
        part_widths=widths,
    )


def _strip_background(
    img: RasterImage, cfg: PipelineConfig, kp: KeypointSet | None
) -> RasterImage:
    if cfg.background == "none":
        return img
    if cfg.background == "color":
        return remove_background_color_groups(img, cfg.color)
    if cfg.background == "edge":
        return remove_background_edges(img, detect_edges(img, cfg.edge))
    if cfg.background == "trunk":
        if kp is None:
            raise ConfigError("trunk background removal needs keypoints")
        trunk_cfg = cfg.trunk or _adaptive_trunk_config(kp)
        return remove_background_trunks(img, kp, trunk_cfg)
    raise ConfigError(f"unknown background method {cfg.background!r}")


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class PipelineResult:
    output_dir: Path
    artifacts: dict[str, Path]
    manifest_path: Path
    armature: Armature
    total_frames: int


def _stage(name: str):
    """Decorator-less stage guard: wrap exceptions with the stage name."""

    class _Guard:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, (StageFailure, ConfigError)):
                raise StageFailure(name, exc) from exc
            return False

    return _Guard()


def _build_rig_stage(
    cfg: PipelineConfig,
    kp: KeypointSet,
    bounds: BoundsReport | None,
) -> tuple[Armature, Placement, ModelBounds3D | None]:
    """Scale resolution, armature build, and mesh placement."""
    model = load_model_bounds(cfg.model_bounds) if cfg.model_bounds else None
    scale: ScaleSolution | None = None
    if model is not None and bounds is not None:
        extents = model.extents
        scale = scale_from_bounds(bounds, model_height=extents[2], model_width=extents[0])
    scaling = resolve_scaling(
        kp,
        scale,
        torso_units=cfg.torso_units,
        neck_factor=cfg.neck_factor,
        head_factor=cfg.head_factor,
    )
    # The armature is extruded at the origin; tau moves only the mesh, so
    # placement sweeps compare a moving model box against fixed joints.
    armature = build_armature(kp, scaling, ORIGIN_PLACEMENT)
    if model is not None:
        placement = model_placement(model, cfg.tau)
    else:
        placement = Placement(location=tuple(cfg.tau), tau=tuple(cfg.tau))
    armature = dataclasses.replace(armature, placement=placement)
    return armature, placement, model


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    """Run every stage and write all artifacts plus the manifest."""
    _validate_inputs(cfg)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    artifacts: dict[str, Path] = {}

    with _stage("preprocess"):
        image = load_image(cfg.image)
        kp = derive_keypoints(load_keypoints(cfg.keypoints))
        processed = _strip_background(image, cfg, kp)
        if cfg.exports.processed_png and cfg.background != "none":
            path = out_dir / "processed.png"
            save_image(processed, path)
            artifacts["processed.png"] = path

    with _stage("contour"):
        bounds = find_bounds(processed, cfg.contour)
        path = out_dir / "bounds.json"
        path.write_text(
            json.dumps(
                {
                    "x_min": bounds.x_min,
                    "y_min": bounds.y_min,
                    "x_max": bounds.x_max,
                    "y_max": bounds.y_max,
                },
                sort_keys=True,
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )
        artifacts["bounds.json"] = path

    with _stage("rig"):
        armature, placement, model = _build_rig_stage(cfg, kp, bounds)
        path = out_dir / "armature.json"
        path.write_text(
            json.dumps(armature_to_doc(armature), sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )
        artifacts["armature.json"] = path

    with _stage("interpret"):
        command_text = _read_command_text(cfg)
        items = extract_commands(command_text)
        if cfg.exports.command_txt:
            path = out_dir / "command.txt"
            write_command_file(items, path)
            artifacts["command.txt"] = path
        specs = interpret(command_text, seed=cfg.seed)

    with _stage("animate"):
        doc = build_animation(
            armature, specs, fps=cfg.fps, frames_per_key=cfg.frames_per_key
        )
        if cfg.exports.neutral:
            path = out_dir / "anim.json"
            export_neutral(doc, path)
            artifacts["anim.json"] = path
        if cfg.exports.bvh:
            path = out_dir / "anim.bvh"
            export_bvh(doc, path)
            artifacts["anim.bvh"] = path

    manifest = {
        "schema_version": 1,
        "seed": cfg.seed,
        "background": cfg.background,
        "artifacts": {
            name: {"path": name, "sha256": _sha256(path)}
            for name, path in sorted(artifacts.items())
        },
    }
    manifest_path = out_dir / MANIFEST_NAME
    manifest_path.write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return PipelineResult(
        output_dir=out_dir,
        artifacts=artifacts,
        manifest_path=manifest_path,
        armature=armature,
        total_frames=doc.total_frames,
    )


# ---------------------------------------------------------------------------
# Placement sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    tau_z: float
    score: float


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]
    best_tau_z: float


def sweep_tau(cfg: PipelineConfig, grid: list[float]) -> SweepReport:
    """Score each vertical nudge candidate against the fixed armature.

    Rows come back in ascending tau_z order; the best row is the highest
    score, ties resolved toward the smaller tau_z.
    """
    if not grid:
        raise ConfigError("sweep grid is empty")
    if not cfg.model_bounds:
        raise ConfigError("sweep needs a model_bounds file to size the box")
    _validate_sweep_inputs(cfg)

    with _stage("preprocess"):
        image = load_image(cfg.image)
        kp = derive_keypoints(load_keypoints(cfg.keypoints))
        processed = _strip_background(image, cfg, kp)
    with _stage("contour"):
        bounds = find_bounds(processed, cfg.contour)
    with _stage("rig"):
        armature, _, model = _build_rig_stage(cfg, kp, bounds)

    rows = []
    for tau_z in sorted(float(t) for t in grid):
        placement = model_placement(model, (cfg.tau[0], cfg.tau[1], tau_z))
        rows.append(SweepRow(tau_z=tau_z, score=overlap_score(armature, model, placement)))
    best = max(rows, key=lambda r: r.score)  # max keeps the first (smallest tau_z) tie
    return SweepReport(rows=tuple(rows), best_tau_z=best.tau_z)


def _validate_sweep_inputs(cfg: PipelineConfig) -> None:
    if not cfg.image or not Path(cfg.image).is_file():
        raise ConfigError(f"image file not found: {cfg.image}")
    if not cfg.keypoints or not Path(cfg.keypoints).is_file():
        raise ConfigError(f"keypoints file not found: {cfg.keypoints}")
    if cfg.model_bounds and not Path(cfg.model_bounds).is_file():
        raise ConfigError(f"model bounds file not found: {cfg.model_bounds}")


# ---------------------------------------------------------------------------
# click commands
# ---------------------------------------------------------------------------


def _exit_on_error(func):
    import functools

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except StageFailure as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except PipelineError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


@click.group()
@click.version_option(package_name="rigmotion")
def main() -> None:
    """Image + keypoints + text commands -> armature + keyframe animation."""


@main.command("strip-bg")
@click.option("--image", "image_path", required=True, type=click.Path())
@click.option("--method", type=click.Choice(["color", "edge", "trunk"]), default="color")
@click.option("--keypoints", "keypoints_path", type=click.Path(), default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
@_exit_on_error
def strip_bg_cmd(image_path: str, method: str, keypoints_path: str | None, out_path: str) -> None:
    """Remove the background from IMAGE and write the RGBA result."""
    if method == "trunk" and not keypoints_path:
        raise ConfigError("--method trunk requires --keypoints")
    cfg = PipelineConfig(image=image_path, keypoints=keypoints_path, background=method, command="")
    if not Path(image_path).is_file():
        raise ConfigError(f"image file not found: {image_path}")
    with _stage("preprocess"):
        image = load_image(image_path)
        kp = None
        if keypoints_path:
            kp = derive_keypoints(load_keypoints(keypoints_path))
        processed = _strip_background(image, cfg, kp)
        save_image(processed, out_path)
    click.echo(f"wrote {out_path}")


@main.command("bounds")
@click.option("--image", "image_path", required=True, type=click.Path())
@click.option("--out", "out_path", type=click.Path(), default=None)
@_exit_on_error
def bounds_cmd(image_path: str, out_path: str | None) -> None:
    """Print (and optionally write) the detected object bounds."""
    if not Path(image_path).is_file():
        raise ConfigError(f"image file not found: {image_path}")
    with _stage("contour"):
        bounds = find_bounds(load_image(image_path), ContourConfig())
    click.echo(
        f"x: {bounds.x_min}..{bounds.x_max}  y: {bounds.y_min}..{bounds.y_max}  "
        f"size: {bounds.pixel_width}x{bounds.pixel_height}"
    )
    if out_path:
        Path(out_path).write_text(
            json.dumps(
                {
                    "x_min": bounds.x_min,
                    "y_min": bounds.y_min,
                    "x_max": bounds.x_max,
                    "y_max": bounds.y_max,
                },
                sort_keys=True,
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )
        click.echo(f"wrote {out_path}")


@main.command("rig")
@click.option("--keypoints", "keypoints_path", required=True, type=click.Path())
@click.option("--image", "image_path", type=click.Path(), default=None)
@click.option("--model-bounds", "model_bounds_path", type=click.Path(), default=None)
@click.option("--tau", nargs=3, type=float, default=(0.0, 0.0, 0.0))
@click.option("--out", "out_path", required=True, type=click.Path())
@_exit_on_error
def rig_cmd(
    keypoints_path: str,
    image_path: str | None,
    model_bounds_path: str | None,
    tau: tuple[float, float, float],
    out_path: str,
) -> None:
    """Build the armature from keypoints and write armature.json."""
    if not Path(keypoints_path).is_file():
        raise ConfigError(f"keypoints file not found: {keypoints_path}")
    cfg = PipelineConfig(
        image=image_path,
        keypoints=keypoints_path,
        command="",
        model_bounds=model_bounds_path,
        tau=tau,
    )
    with _stage("rig"):
        kp = derive_keypoints(load_keypoints(keypoints_path))
        bounds = None
        if image_path:
            if not Path(image_path).is_file():
                raise ConfigError(f"image file not found: {image_path}")
            bounds = find_bounds(load_image(image_path), cfg.contour)
        armature, _, _ = _build_rig_stage(cfg, kp, bounds)
        Path(out_path).write_text(
            json.dumps(armature_to_doc(armature), sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )
    click.echo(f"wrote {out_path}")


@main.command("interpret")
@click.option("--command", "command_text", default=None)
@click.option("--command-file", "command_file", type=click.Path(), default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
@_exit_on_error
def interpret_cmd(
    command_text: str | None, command_file: str | None, seed: int, out_path: str | None
) -> None:
    """Extract and quantize the sub-commands of a text command."""
    if command_text is None and not command_file:
        raise ConfigError("pass --command or --command-file")
    if command_text is None:
        if not Path(command_file).is_file():
            raise ConfigError(f"command file not found: {command_file}")
        command_text = Path(command_file).read_text(encoding="utf-8").removesuffix("\n")
    with _stage("interpret"):
        items = extract_commands(command_text)
        specs = interpret(command_text, seed=seed)
    for item, spec in zip(items, specs):
        detail = f"side={spec.side}" if spec.side else f"direction={spec.direction}"
        angle = "default" if spec.degrees < 0 else f"{spec.degrees:g} deg"
        click.echo(
            f"{item.action},{item.part},{item.start},{item.end}  {detail}  {angle}"
        )
    if out_path:
        write_command_file(items, out_path)
        click.echo(f"wrote {out_path}")


@main.command("animate")
@click.option("--armature", "armature_path", required=True, type=click.Path())
@click.option("--command", "command_text", default=None)
@click.option("--command-file", "command_file", type=click.Path(), default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--fps", type=int, default=anim_mod.DEFAULT_FPS, show_default=True)
@click.option(
    "--frames-per-key", type=int, default=anim_mod.DEFAULT_FRAMES_PER_KEY, show_default=True
)
@click.option("--out-neutral", "neutral_path", type=click.Path(), default=None)
@click.option("--out-bvh", "bvh_path", type=click.Path(), default=None)
@_exit_on_error
def animate_cmd(
    armature_path: str,
    command_text: str | None,
    command_file: str | None,
    seed: int,
    fps: int,
    frames_per_key: int,
    neutral_path: str | None,
    bvh_path: str | None,
) -> None:
    """Interpret a command against an armature.json and export animation."""
    from .rig import armature_from_doc

    if command_text is None and not command_file:
        raise ConfigError("pass --command or --command-file")
    if not Path(armature_path).is_file():
        raise ConfigError(f"armature file not found: {armature_path}")
    if command_text is None:
        if not Path(command_file).is_file():
            raise ConfigError(f"command file not found: {command_file}")
        command_text = Path(command_file).read_text(encoding="utf-8").removesuffix("\n")
    with _stage("animate"):
        armature = armature_from_doc(
            json.loads(Path(armature_path).read_text(encoding="utf-8"))
        )
        specs = interpret(command_text, seed=seed)
        doc = build_animation(armature, specs, fps=fps, frames_per_key=frames_per_key)
        if neutral_path:
            export_neutral(doc, neutral_path)
            click.echo(f"wrote {neutral_path}")
        if bvh_path:
            export_bvh(doc, bvh_path)
            click.echo(f"wrote {bvh_path}")
    click.echo(f"{len(specs)} actions, {doc.total_frames} frames")


def _pipeline_overrides(**kwargs) -> dict:
    return {k: v for k, v in kwargs.items() if v is not None}


@main.command("pipeline")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help=f"JSON config; defaults to ${CONFIG_ENV_VAR} when set.")
@click.option("--image", default=None, type=click.Path())
@click.option("--keypoints", default=None, type=click.Path())
@click.option("--command", default=None)
@click.option("--command-file", default=None, type=click.Path())
@click.option("--background", default=None, type=click.Choice(list(BACKGROUND_METHODS)))
@click.option("--seed", default=None, type=int)
@click.option("--tau", default=None, nargs=3, type=float)
@click.option("--output-dir", default=None, type=click.Path())
@click.option("--model-bounds", default=None, type=click.Path())
@_exit_on_error
def pipeline_cmd(config_path, image, keypoints, command, command_file, background, seed, tau, output_dir, model_bounds) -> None:
    """Run the full pipeline and write all artifacts plus manifest.json."""
    overrides = _pipeline_overrides(
        image=image,
        keypoints=keypoints,
        command=command,
        command_file=command_file,
        background=background,
        seed=seed,
        tau=tuple(tau) if tau else None,
        output_dir=output_dir,
        model_bounds=model_bounds,
    )
    cfg = _merged_config(config_path, overrides)
    result = run_pipeline(cfg)
    for name in sorted(result.artifacts):
        click.echo(f"wrote {result.artifacts[name]}")
    click.echo(f"wrote {result.manifest_path}")
    click.echo(f"{result.total_frames} frames")


@main.command("sweep-tau")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--image", default=None, type=click.Path())
@click.option("--keypoints", default=None, type=click.Path())
@click.option("--model-bounds", default=None, type=click.Path())
@click.option("--grid", required=True, help="Comma-separated tau_z candidates, e.g. 0,0.05,0.10")
@click.option("--out", "out_path", type=click.Path(), default=None)
@_exit_on_error
def sweep_tau_cmd(config_path, image, keypoints, model_bounds, grid, out_path) -> None:
    """Score tau_z candidates by armature-vs-model overlap."""
    try:
        values = [float(v) for v in grid.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad grid value: {exc}") from exc
    overrides = _pipeline_overrides(
        image=image, keypoints=keypoints, model_bounds=model_bounds, command=""
    )
    cfg = _merged_config(config_path, overrides)
    report = sweep_tau(cfg, values)
    for row in report.rows:
        marker = " <- best" if row.tau_z == report.best_tau_z else ""
        click.echo(f"tau_z={row.tau_z:g}  score={row.score:.4f}{marker}")
    if out_path:
        Path(out_path).write_text(
            json.dumps(
                {
                    "rows": [
                        {"tau_z": row.tau_z, "score": row.score} for row in report.rows
                    ],
                    "best_tau_z": report.best_tau_z,
                },
                sort_keys=True,
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )
        click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
