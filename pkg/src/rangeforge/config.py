"""Run configuration: one JSON file shared by every CLI subcommand."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .metrics import AxesSpec
from .pathfind import PhysicsSpec
from .patterns import TEMPLATE_KINDS


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Paths, windowing, axes, scheduling knobs, and physics."""

    levels_dir: Path
    catalog_path: Path | None  # None selects the bundled SMB catalog
    output_dir: Path
    window_width: int = 20
    window_height: int = 14
    stride: int = 1
    generate_width: int | None = None  # default: window size
    generate_height: int | None = None
    axes: AxesSpec = field(default_factory=AxesSpec)
    template: str = "ring"
    threshold: int = 10
    budget_seconds: float = 43200.0
    attempt_timeout_seconds: float = 900.0
    seed: int = 0
    workers: int = 1
    physics: PhysicsSpec = field(default_factory=PhysicsSpec)
    external_solver: list[str] | None = None

    def __post_init__(self) -> None:
        if self.template not in TEMPLATE_KINDS:
            raise ConfigError(f"unknown template {self.template!r}")
        for name, value, lo in (
            ("window_width", self.window_width, 1),
            ("window_height", self.window_height, 1),
            ("stride", self.stride, 1),
            ("threshold", self.threshold, 1),
            ("workers", self.workers, 1),
            ("budget_seconds", self.budget_seconds, 0),
            ("attempt_timeout_seconds", self.attempt_timeout_seconds, 0),
        ):
            if value < lo:
                raise ConfigError(f"{name} must be >= {lo}, got {value}")
        if self.generate_width is None:
            self.generate_width = self.window_width
        if self.generate_height is None:
            self.generate_height = self.window_height

    def require_paths(self, *names: str) -> None:
        """Fail early when a referenced input path is missing."""
        for name in names:
            path = getattr(self, name)
            if path is not None and not Path(path).exists():
                raise ConfigError(f"{name} does not exist: {path}")


def _axes_from_json(payload: dict) -> AxesSpec:
    d = payload.get("density", [0, 150, 15])
    h = payload.get("difficulty", [0, 24, 3])
    return AxesSpec(
        density_min=d[0], density_max=d[1], density_bin_width=d[2],
        difficulty_min=h[0], difficulty_max=h[1], difficulty_bin_width=h[2],
    )


def load_config(path) -> RunConfig:
    """Read and validate a config file; see README for the schema."""
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc

    window = payload.get("window", {})
    generate = payload.get("generate", {})
    physics = payload.get("physics", {})
    base = Path(path).parent
    catalog = payload.get("catalog")

    def anchored(p):
        p = Path(p)
        return p if p.is_absolute() else base / p

    return RunConfig(
        levels_dir=anchored(payload.get("levels_dir", "levels")),
        catalog_path=anchored(catalog) if catalog else None,
        output_dir=anchored(payload.get("output_dir", "out")),
        window_width=window.get("width", 20),
        window_height=window.get("height", 14),
        stride=window.get("stride", 1),
        generate_width=generate.get("width"),
        generate_height=generate.get("height"),
        axes=_axes_from_json(payload.get("axes", {})),
        template=payload.get("template", "ring"),
        threshold=payload.get("threshold", 10),
        budget_seconds=payload.get("budget_seconds", 43200.0),
        attempt_timeout_seconds=payload.get("attempt_timeout_seconds", 900.0),
        seed=payload.get("seed", 0),
        workers=payload.get("workers", 1),
        physics=PhysicsSpec(
            max_jump_height=physics.get("max_jump_height", 4),
            max_jump_span=physics.get("max_jump_span", 4),
        ),
        external_solver=payload.get("external_solver"),
    )
