"""Planning costmap: inflated obstacle costs with distance decay, plus a
user-steerable low-cost valley expressed in its own rotated frame.

The valley filter adds `strength` cost everywhere except a corridor ahead of
the frame origin, which pulls the planned path toward the lateral offset the
user indicated. With side_gain > 1 the half-plane on the indicated side stays
cheaper than the opposite side, so detours forced around obstacles prefer it.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import shapely
from scipy.ndimage import distance_transform_edt
from shapely.geometry import Polygon

from .world import Obstacle

LETHAL = 255


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned grid; (origin_x, origin_y) is the center of cell (0, 0)."""
    origin_x: float
    origin_y: float
    resolution: float
    width: int      # cells along x
    height: int     # cells along y

    def __post_init__(self) -> None:
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")
        if self.width < 1 or self.height < 1:
            raise ValueError("grid must have at least one cell")

    @classmethod
    def from_bounds(cls, bounds: Sequence[float], resolution: float) -> "GridSpec":
        xmin, ymin, xmax, ymax = bounds
        width = max(1, math.ceil((xmax - xmin) / resolution))
        height = max(1, math.ceil((ymax - ymin) / resolution))
        # center the first cell half a step inside the bounds
        return cls(xmin + resolution / 2, ymin + resolution / 2, resolution, width, height)

    def cell_center(self, ix: int, iy: int) -> tuple[float, float]:
        return (self.origin_x + ix * self.resolution, self.origin_y + iy * self.resolution)

    def world_to_cell(self, x: float, y: float) -> tuple[int, int]:
        return (
            int(round((x - self.origin_x) / self.resolution)),
            int(round((y - self.origin_y) / self.resolution)),
        )

    def contains_cell(self, ix: int, iy: int) -> bool:
        return 0 <= ix < self.width and 0 <= iy < self.height

    def center_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, Y) meshgrids of cell-center coordinates, shape (height, width)."""
        xs = self.origin_x + self.resolution * np.arange(self.width)
        ys = self.origin_y + self.resolution * np.arange(self.height)
        return np.meshgrid(xs, ys)


@dataclass(frozen=True)
class Costmap:
    """Quantized traversal costs in [0, 255]; 255 marks inflated obstacles."""
    spec: GridSpec
    cells: np.ndarray   # uint8, shape (height, width), row iy / column ix

    def __post_init__(self) -> None:
        if self.cells.shape != (self.spec.height, self.spec.width):
            raise ValueError("cells shape does not match grid spec")
        if self.cells.dtype != np.uint8:
            raise ValueError("cells must be uint8")

    def cost_at_cell(self, ix: int, iy: int) -> int:
        return int(self.cells[iy, ix])

    def is_lethal(self, ix: int, iy: int) -> bool:
        return self.cells[iy, ix] == LETHAL


def inflate_obstacles(obstacles: Iterable[Obstacle], radius: float, spec: GridSpec) -> np.ndarray:
    """Boolean lethal mask: cells whose center lies within `radius` of any obstacle.

    This is the discrete Minkowski sum of the obstacle set with a disk, so the
    planner can treat the robot as a point.
    """
    if radius <= 0:
        raise ValueError("inflation radius must be positive")
    mask = np.zeros((spec.height, spec.width), dtype=bool)
    res = spec.resolution
    for obs in obstacles:
        bx0, by0, bx1, by1 = obs.bbox()
        ix0 = max(0, int(math.floor((bx0 - radius - spec.origin_x) / res)))
        ix1 = min(spec.width - 1, int(math.ceil((bx1 + radius - spec.origin_x) / res)))
        iy0 = max(0, int(math.floor((by0 - radius - spec.origin_y) / res)))
        iy1 = min(spec.height - 1, int(math.ceil((by1 + radius - spec.origin_y) / res)))
        if ix0 > ix1 or iy0 > iy1:
            continue
        xs = spec.origin_x + res * np.arange(ix0, ix1 + 1)
        ys = spec.origin_y + res * np.arange(iy0, iy1 + 1)
        X, Y = np.meshgrid(xs, ys)
        if obs.shape == "circle":
            cx, cy = obs.center
            hit = (X - cx) ** 2 + (Y - cy) ** 2 <= (obs.radius + radius) ** 2
        else:
            pts = shapely.points(X.ravel(), Y.ravel())
            hit = shapely.dwithin(pts, Polygon(obs.points), radius).reshape(X.shape)
        mask[iy0:iy1 + 1, ix0:ix1 + 1] |= hit
    return mask


def obstacle_cost_grid(mask: np.ndarray, spec: GridSpec, decay_rate: float = 2.0) -> Costmap:
    """Costmap from a lethal mask: 255 inside, exponential falloff with
    center-to-center distance outside."""
    cells = np.zeros(mask.shape, dtype=np.uint8)
    if mask.any():
        dist = distance_transform_edt(~mask, sampling=spec.resolution)
        cells = np.rint(254.0 * np.exp(-decay_rate * dist)).astype(np.uint8)
        cells[mask] = LETHAL
    return Costmap(spec, cells)


def fit_path_direction(points: np.ndarray, x: float, y: float, theta: float,
                       arc_len: float = 5.0) -> tuple[float, float]:
    """Unit direction of a total-least-squares line through the next `arc_len`
    meters of path, starting at the vertex closest to (x, y).

    The sign follows the path's forward progression; a degenerate segment
    falls back to the robot heading.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("path must contain at least one point")
    d2 = (pts[:, 0] - x) ** 2 + (pts[:, 1] - y) ** 2
    i0 = int(np.argmin(d2))
    seg = np.linalg.norm(np.diff(pts[i0:], axis=0), axis=1)
    arc = np.concatenate(([0.0], np.cumsum(seg)))
    stop = int(np.searchsorted(arc, arc_len, side="right"))
    window = pts[i0:i0 + max(stop, 1)]
    if len(window) < 2:
        return (math.cos(theta), math.sin(theta))
    centered = window - window.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    direction = vt[0]
    norm = float(np.linalg.norm(direction))
    if norm < 1e-12:
        return (math.cos(theta), math.sin(theta))
    direction = direction / norm
    forward = window[-1] - window[0]
    align = float(direction @ forward)
    if align == 0.0:
        align = direction[0] * math.cos(theta) + direction[1] * math.sin(theta)
    if align < 0:
        direction = -direction
    return (float(direction[0]), float(direction[1]))


@dataclass(frozen=True)
class CostFilterParams:
    """User-input valley: placement offset plus shape parameters."""
    offset: float               # signed lateral displacement of the valley, m
    width: float = 3.0          # valley width, m
    length: float = 5.0         # valley reach along the travel direction, m
    strength: int = 100         # added cost outside the valley, [0, 255]
    side_gain: float = 1.2      # >1 keeps the indicated side cheaper

    def __post_init__(self) -> None:
        if self.width <= 0 or self.length <= 0:
            raise ValueError("width and length must be positive")
        if not 0 <= self.strength <= 255:
            raise ValueError("strength must be in [0, 255]")
        if self.side_gain < 1.0:
            raise ValueError("side_gain must be >= 1")
        if abs(self.offset) > 5.0 + 1e-9:
            raise ValueError("offset magnitude cannot exceed 5 m")

    @property
    def side(self) -> int:
        return 0 if self.offset == 0 else (1 if self.offset > 0 else -1)

    def as_dict(self) -> dict:
        return {"d": self.offset, "w": self.width, "l": self.length,
                "s": self.strength, "p": self.side_gain}


@dataclass(frozen=True)
class CostFrame:
    """Valley frame: origin at the user's offset, y axis along the fitted path
    direction, x axis 90 degrees clockwise from it."""
    origin: tuple[float, float]
    y_axis: tuple[float, float]

    def __post_init__(self) -> None:
        norm = math.hypot(*self.y_axis)
        if abs(norm - 1.0) > 1e-9:
            object.__setattr__(self, "y_axis", (self.y_axis[0] / norm, self.y_axis[1] / norm))

    @property
    def x_axis(self) -> tuple[float, float]:
        return (self.y_axis[1], -self.y_axis[0])

    def to_frame(self, x: float, y: float) -> tuple[float, float]:
        dx = x - self.origin[0]
        dy = y - self.origin[1]
        xa = self.x_axis
        ya = self.y_axis
        return (dx * xa[0] + dy * xa[1], dx * ya[0] + dy * ya[1])

    def from_frame(self, cx: float, cy: float) -> tuple[float, float]:
        xa = self.x_axis
        ya = self.y_axis
        return (self.origin[0] + cx * xa[0] + cy * ya[0],
                self.origin[1] + cx * xa[1] + cy * ya[1])

    def as_dict(self) -> dict:
        return {"origin": list(self.origin), "y_axis": list(self.y_axis)}


# Robot-frame x axis points 90 degrees clockwise from the heading, so a
# positive joystick deflection (and a positive offset) means "to the right".
def robot_right_axis(theta: float) -> tuple[float, float]:
    return (math.sin(theta), -math.cos(theta))


def make_cost_frame(x: float, y: float, theta: float, offset: float,
                    direction: tuple[float, float]) -> CostFrame:
    rx, ry = robot_right_axis(theta)
    return CostFrame(origin=(x + offset * rx, y + offset * ry), y_axis=direction)


def _sigmoid(t):
    # numerically stable on both tails
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    ez = np.exp(t[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def valley_cross_profile(cx, width: float, side_gain: float = 1.0, side: int = 0):
    """Lateral shaping across the valley.

    Two sigmoids of width ~width/2 sit at -width/4 and +width/4. The result is
    ~1 at the valley center, ~0 on the tail opposite the indicated side, and
    side_gain - 1 on the indicated side's tail. side=0 evaluates symmetrically
    with unit gain.
    """
    gain = side_gain if side != 0 else 1.0
    sgn = side if side != 0 else 1
    k = 16.0 / width
    b = width / 4.0
    xi = np.asarray(cx, dtype=float) * sgn
    return gain * _sigmoid(k * (b + xi)) + _sigmoid(k * (b - xi)) - 1.0


def valley_along_profile(cy, length: float):
    """Attenuation along the travel direction: ~1 from the origin out to
    `length`, rolling off ahead of it and quickly behind the origin."""
    cy = np.asarray(cy, dtype=float)
    return _sigmoid(2.0 * length - 2.0 * cy) * _sigmoid(4.0 * cy + 2.0)


def filter_cost_grid(spec: GridSpec, frame: CostFrame, params: CostFilterParams) -> np.ndarray:
    """Quantized valley cost for every cell center, uint8 in [0, 255]."""
    X, Y = spec.center_arrays()
    dx = X - frame.origin[0]
    dy = Y - frame.origin[1]
    xa = frame.x_axis
    ya = frame.y_axis
    cx = dx * xa[0] + dy * xa[1]
    cy = dx * ya[0] + dy * ya[1]
    lateral = valley_cross_profile(cx, params.width, params.side_gain, params.side)
    along = valley_along_profile(cy, params.length)
    raw = params.strength * (1.0 - lateral * along)
    return np.rint(np.clip(raw, 0.0, 255.0)).astype(np.uint8)


def filter_cost_at(x: float, y: float, frame: CostFrame, params: CostFilterParams) -> int:
    """Valley cost at a single world point; same code path as the grid fill."""
    cx, cy = frame.to_frame(x, y)
    lateral = valley_cross_profile(cx, params.width, params.side_gain, params.side)
    along = valley_along_profile(cy, params.length)
    raw = params.strength * (1.0 - lateral * along)
    return int(np.rint(np.clip(raw, 0.0, 255.0)))


def compose_costmap(obstacle_costs: Costmap,
                    active_filter: tuple[CostFrame, CostFilterParams] | None = None) -> Costmap:
    """Combine obstacle and user-input costs; obstacle cost is never reduced
    and the channel saturates at 255."""
    if active_filter is None:
        return obstacle_costs
    frame, params = active_filter
    base = obstacle_costs.cells.astype(np.int32)
    add = filter_cost_grid(obstacle_costs.spec, frame, params).astype(np.int32)
    combined = np.minimum(LETHAL, np.maximum(base, base + add)).astype(np.uint8)
    return Costmap(obstacle_costs.spec, combined)


def dump_costmap(cm: Costmap, path: str | Path) -> None:
    """Row-major CSV of integer costs plus a JSON sidecar with the grid header."""
    p = Path(path)
    with p.open("w") as fh:
        for row in cm.cells:
            fh.write(",".join(str(int(v)) for v in row))
            fh.write("\n")
    sidecar = {
        "origin": [cm.spec.origin_x, cm.spec.origin_y],
        "resolution": cm.spec.resolution,
        "width": cm.spec.width,
        "height": cm.spec.height,
    }
    Path(str(p) + ".json").write_text(json.dumps(sidecar, indent=2) + "\n")


def load_costmap(path: str | Path) -> Costmap:
    p = Path(path)
    cells = np.loadtxt(p, delimiter=",", dtype=np.int64, ndmin=2).astype(np.uint8)
    meta = json.loads(Path(str(p) + ".json").read_text())
    spec = GridSpec(meta["origin"][0], meta["origin"][1], meta["resolution"],
                    meta["width"], meta["height"])
    return Costmap(spec, cells)
