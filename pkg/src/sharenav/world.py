"""World description and file format.

A world document is a single JSON object:

    {
      "bounds": [xmin, ymin, xmax, ymax],          // meters
      "start":  {"x": .., "y": .., "theta": ..},   // robot pose
      "goal":   [x, y],
      "obstacles": [
        {"name": "tree_1", "shape": "circle", "center": [x, y],
         "radius": r, "a_priori": true},
        {"name": "shed", "shape": "polygon", "points": [[x, y], ...],
         "a_priori": false}
      ],
      "pools": [
        {"name": "pool_1", "center": [x, y], "radius": r,
         "intensity": 1.0, "fade": 3.0}
      ]
    }

Obstacles with a_priori=false are unknown to the robot until sensed.
Pools are ground hazards only: they never block the planner, matching a
camera-only robot that cannot detect spills, and feed the radiation metric.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from shapely.geometry import Point, Polygon


class WorldError(Exception):
    pass


class ParseError(WorldError):
    pass


class ValidationError(WorldError):
    pass


@dataclass
class Obstacle:
    name: str
    shape: str                      # "circle" | "polygon"
    a_priori: bool = True
    center: tuple[float, float] | None = None
    radius: float | None = None
    points: tuple[tuple[float, float], ...] | None = None
    _poly: Polygon | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.shape == "circle":
            if self.center is None or self.radius is None or self.radius < 0:
                raise ValidationError(f"obstacle {self.name!r}: circle needs center and radius >= 0")
        elif self.shape == "polygon":
            if not self.points or len(self.points) < 3:
                raise ValidationError(f"obstacle {self.name!r}: polygon needs >= 3 points")
            self._poly = Polygon(self.points)
            if not self._poly.is_valid:
                raise ValidationError(f"obstacle {self.name!r}: polygon is self-intersecting")
        else:
            raise ValidationError(f"obstacle {self.name!r}: unknown shape {self.shape!r}")

    def distance(self, x: float, y: float) -> float:
        """Distance from a point to the obstacle boundary; 0 inside."""
        if self.shape == "circle":
            cx, cy = self.center
            return max(0.0, math.hypot(x - cx, y - cy) - self.radius)
        return self._poly.distance(Point(x, y))

    def bbox(self) -> tuple[float, float, float, float]:
        if self.shape == "circle":
            cx, cy = self.center
            r = self.radius
            return (cx - r, cy - r, cx + r, cy + r)
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return (min(xs), min(ys), max(xs), max(ys))

    def as_dict(self) -> dict:
        d: dict = {"name": self.name, "shape": self.shape}
        if self.shape == "circle":
            d["center"] = [self.center[0], self.center[1]]
            d["radius"] = self.radius
        else:
            d["points"] = [[px, py] for px, py in self.points]
        d["a_priori"] = self.a_priori
        return d


@dataclass
class Pool:
    """Toxic pool: full intensity inside the radius, linear fade outside."""
    name: str
    center: tuple[float, float]
    radius: float
    intensity: float = 1.0
    fade: float = 3.0

    def __post_init__(self) -> None:
        if self.radius < 0 or self.fade <= 0 or self.intensity < 0:
            raise ValidationError(f"pool {self.name!r}: radius >= 0, fade > 0, intensity >= 0 required")

    def distance(self, x: float, y: float) -> float:
        """Distance to the pool edge; 0 inside."""
        cx, cy = self.center
        return max(0.0, math.hypot(x - cx, y - cy) - self.radius)

    def intensity_at(self, x: float, y: float) -> float:
        ramp = 1.0 - self.distance(x, y) / self.fade
        return self.intensity * min(1.0, max(0.0, ramp))

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "center": [self.center[0], self.center[1]],
            "radius": self.radius,
            "intensity": self.intensity,
            "fade": self.fade,
        }


@dataclass
class WorldModel:
    bounds: tuple[float, float, float, float]      # xmin, ymin, xmax, ymax
    start: tuple[float, float, float]              # x, y, theta
    goal: tuple[float, float]
    obstacles: tuple[Obstacle, ...] = ()
    pools: tuple[Pool, ...] = ()

    def __post_init__(self) -> None:
        xmin, ymin, xmax, ymax = self.bounds
        if not (xmax > xmin and ymax > ymin):
            raise ValidationError("bounds must satisfy xmax > xmin and ymax > ymin")
        for label, (px, py) in (("start", self.start[:2]), ("goal", self.goal)):
            if not (xmin <= px <= xmax and ymin <= py <= ymax):
                raise ValidationError(f"{label} lies outside world bounds")
        for obs in self.obstacles:
            bx0, by0, bx1, by1 = obs.bbox()
            if bx0 < xmin or by0 < ymin or bx1 > xmax or by1 > ymax:
                raise ValidationError(f"obstacle {obs.name!r} extends outside world bounds")
            for label, (px, py) in (("start", self.start[:2]), ("goal", self.goal)):
                if obs.distance(px, py) <= 0.0:
                    raise ValidationError(f"{label} lies inside obstacle {obs.name!r}")
        for pool in self.pools:
            cx, cy = pool.center
            if not (xmin <= cx - pool.radius and cx + pool.radius <= xmax
                    and ymin <= cy - pool.radius and cy + pool.radius <= ymax):
                raise ValidationError(f"pool {pool.name!r} extends outside world bounds")

    def clearance(self, x: float, y: float, robot_radius: float) -> float | None:
        """Distance margin between the robot disc and the nearest obstacle.

        Negative means penetration; None when the world has no obstacles.
        """
        if not self.obstacles:
            return None
        return min(o.distance(x, y) for o in self.obstacles) - robot_radius

    def as_dict(self) -> dict:
        return {
            "bounds": list(self.bounds),
            "start": {"x": self.start[0], "y": self.start[1], "theta": self.start[2]},
            "goal": [self.goal[0], self.goal[1]],
            "obstacles": [o.as_dict() for o in self.obstacles],
            "pools": [p.as_dict() for p in self.pools],
        }


def _require(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise ParseError(f"{where}: missing key {key!r}")
    value = doc[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"{where}: {key!r} must be a number")
        return float(value)
    if not isinstance(value, kind):
        raise ParseError(f"{where}: {key!r} must be {kind.__name__}")
    return value


def _point(value, where: str) -> tuple[float, float]:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        raise ParseError(f"{where}: expected [x, y]")
    return (float(value[0]), float(value[1]))


def world_from_dict(doc: dict) -> WorldModel:
    if not isinstance(doc, dict):
        raise ParseError("world document must be a JSON object")
    bounds = _require(doc, "bounds", list, "world")
    if len(bounds) != 4:
        raise ParseError("world: bounds must be [xmin, ymin, xmax, ymax]")
    start_doc = _require(doc, "start", dict, "world")
    start = (
        _require(start_doc, "x", float, "start"),
        _require(start_doc, "y", float, "start"),
        _require(start_doc, "theta", float, "start"),
    )
    goal = _point(_require(doc, "goal", list, "world"), "goal")

    obstacles: list[Obstacle] = []
    for i, entry in enumerate(doc.get("obstacles", [])):
        where = f"obstacles[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: expected an object")
        name = entry.get("name", where)
        shape = _require(entry, "shape", str, where)
        a_priori = bool(entry.get("a_priori", True))
        if shape == "circle":
            obstacles.append(Obstacle(
                name=name, shape="circle", a_priori=a_priori,
                center=_point(_require(entry, "center", list, where), where),
                radius=_require(entry, "radius", float, where),
            ))
        elif shape == "polygon":
            pts = _require(entry, "points", list, where)
            obstacles.append(Obstacle(
                name=name, shape="polygon", a_priori=a_priori,
                points=tuple(_point(p, where) for p in pts),
            ))
        else:
            raise ParseError(f"{where}: unknown shape {shape!r}")

    pools: list[Pool] = []
    for i, entry in enumerate(doc.get("pools", [])):
        where = f"pools[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: expected an object")
        pools.append(Pool(
            name=entry.get("name", where),
            center=_point(_require(entry, "center", list, where), where),
            radius=_require(entry, "radius", float, where),
            intensity=float(entry.get("intensity", 1.0)),
            fade=float(entry.get("fade", 3.0)),
        ))

    return WorldModel(
        bounds=tuple(float(b) for b in bounds),
        start=start,
        goal=goal,
        obstacles=tuple(obstacles),
        pools=tuple(pools),
    )


def load_world(path: str | Path) -> WorldModel:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read world file {p}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"world file {p} is not valid JSON: {exc}") from exc
    return world_from_dict(doc)


def save_world(world: WorldModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(world.as_dict(), indent=2) + "\n")
