"""Run configuration: timing, robot geometry, costmap and controller parameters."""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path

ENV_CONFIG = "SHARENAV_CONFIG"


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class SimConfig:
    # timing
    dt: float = 0.05
    input_latency: float = 1.0          # user-input delay, must be a multiple of dt
    feedback_latency: float = 0.0       # optional symmetric state-feedback delay
    replan_hz: float = 2.0
    timeout: float = 600.0
    # robot / sensing
    robot_radius: float = 0.35
    inflation_margin: float = 0.15      # extra inflation beyond the robot disk
    sensor_range: float = 8.0
    # costmap
    resolution: float = 0.1
    decay_rate: float = 2.0             # obstacle cost falloff, 1/m
    # planner; 20 is the smallest round weight at which a full-strength valley
    # keeps pulling the path monotonically out to the deepest (5 m) offsets
    cost_weight: float = 20.0           # scales cell cost into edge traversal cost
    # controller
    lookahead: float = 0.8
    cruise_speed: float = 1.0
    goal_tolerance: float = 0.5
    decel_distance: float = 1.5
    turn_mapping: str = "multiplicative"   # or "additive" (as-printed variant)
    # user-input cost filter defaults
    filter_width: float = 3.0
    filter_length: float = 5.0
    filter_strength: int = 100
    filter_side_gain: float = 1.2
    # metrics
    radiation_metric: str = "intensity"    # or "distance" (literal pool-distance integral)

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        ticks = self.input_latency / self.dt
        if abs(ticks - round(ticks)) > 1e-9:
            raise ConfigError("input_latency must be a multiple of dt")
        fb = self.feedback_latency / self.dt
        if abs(fb - round(fb)) > 1e-9:
            raise ConfigError("feedback_latency must be a multiple of dt")
        if self.replan_hz <= 0 or self.replan_hz > 1.0 / self.dt + 1e-9:
            raise ConfigError("replan_hz must be in (0, 1/dt]")
        if self.turn_mapping not in ("multiplicative", "additive"):
            raise ConfigError(f"unknown turn_mapping {self.turn_mapping!r}")
        if self.radiation_metric not in ("intensity", "distance"):
            raise ConfigError(f"unknown radiation_metric {self.radiation_metric!r}")
        if not 0 <= self.filter_strength <= 255:
            raise ConfigError("filter_strength must be in [0, 255]")
        if self.filter_side_gain < 1.0:
            raise ConfigError("filter_side_gain must be >= 1")

    @property
    def latency_ticks(self) -> int:
        return round(self.input_latency / self.dt)

    @property
    def replan_stride(self) -> int:
        """Ticks between scheduled replans."""
        return max(1, round(1.0 / (self.replan_hz * self.dt)))

    def replaced(self, **overrides) -> "SimConfig":
        return dataclasses.replace(self, **overrides)


def load_config(path: str | Path | None = None) -> SimConfig:
    """Build a SimConfig from a JSON file of field overrides.

    Falls back to the SHARENAV_CONFIG env var, then to defaults. Unknown
    keys are rejected so typos fail loudly.
    """
    if path is None:
        path = os.environ.get(ENV_CONFIG) or None
    if path is None:
        return SimConfig()
    p = Path(path)
    try:
        doc = json.loads(p.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {p} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config {p} must contain a JSON object")
    known = {f.name for f in dataclasses.fields(SimConfig)}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ConfigError(f"config {p} has unknown keys: {', '.join(unknown)}")
    return SimConfig(**doc)
