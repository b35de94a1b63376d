"""A* grid search over the composed costmap.

Edge cost is step_length * (1 + weight * cost(dest) / 255) on an 8-connected
grid; the heuristic is plain octile distance, which never exceeds the true
cost because every multiplier is >= 1. Total costs are tracked as an exact
(straight, diagonal) pair of weight sums so optimality checks against an
independent search can compare without float slack.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .costmap import Costmap, LETHAL

SQRT2 = math.sqrt(2.0)

# (dy, dx, diagonal) neighbor order; fixed for deterministic expansion
NEIGHBORS = (
    (-1, -1, True), (-1, 0, False), (-1, 1, True),
    (0, -1, False), (0, 1, False),
    (1, -1, True), (1, 0, False), (1, 1, True),
)


class NoPathError(Exception):
    pass


@dataclass(frozen=True)
class GlobalPath:
    """Planner output: world points at cell centers plus exact cost bookkeeping.

    cost_pair holds (sum of straight-step weights, sum of diagonal-step
    weights) where each step into a cell weighs 255 + weight * cost(cell);
    with the default integer weight both sums are exact.
    """
    points: np.ndarray          # (N, 2) world coords
    cells: np.ndarray           # (N, 2) int (ix, iy)
    cum_arc: np.ndarray         # (N,) arc length from the first point
    cost: float                 # total edge cost, meters-equivalent
    cost_pair: tuple[float, float]

    def __len__(self) -> int:
        return len(self.points)

    @property
    def arc_length(self) -> float:
        return float(self.cum_arc[-1])

    @property
    def end(self) -> tuple[float, float]:
        return (float(self.points[-1, 0]), float(self.points[-1, 1]))


@dataclass(frozen=True)
class PlanRequest:
    start: tuple[float, float]
    goal: tuple[float, float]
    costmap: Costmap


def _cell_weights(costmap: Costmap, weight: float) -> np.ndarray:
    return 255.0 + weight * costmap.cells.astype(np.float64)


def _octile_table(width: int, height: int, gx: int, gy: int) -> np.ndarray:
    dx = np.abs(np.arange(width) - gx)
    dy = np.abs(np.arange(height) - gy)[:, None]
    lo = np.minimum(dx, dy)
    hi = np.maximum(dx, dy)
    return 255.0 * ((hi - lo) + SQRT2 * lo)


def plan(req: PlanRequest, weight: float = 20.0) -> GlobalPath:
    """Minimum-cost 8-connected path from start to goal.

    Ties on f are broken by smaller heuristic, then by cell index, so the
    result is deterministic. Raises NoPathError when the goal is not
    reachable through non-lethal cells.
    """
    cm = req.costmap
    spec = cm.spec
    sx, sy = spec.world_to_cell(*req.start)
    gx, gy = spec.world_to_cell(*req.goal)
    for label, (ix, iy) in (("start", (sx, sy)), ("goal", (gx, gy))):
        if not spec.contains_cell(ix, iy):
            raise NoPathError(f"{label} cell ({ix}, {iy}) is outside the grid")
        if cm.cells[iy, ix] == LETHAL:
            raise NoPathError(f"{label} cell ({ix}, {iy}) is lethal")

    width, height = spec.width, spec.height
    n = width * height
    lethal = (cm.cells == LETHAL).ravel()
    weights = _cell_weights(cm, weight).ravel()
    h_table = _octile_table(width, height, gx, gy).ravel()

    straight = np.zeros(n, dtype=np.float64)   # exact sums of step weights
    diagonal = np.zeros(n, dtype=np.float64)
    best = np.full(n, np.inf, dtype=np.float64)
    parent = np.full(n, -1, dtype=np.int64)

    start_idx = sy * width + sx
    goal_idx = gy * width + gx
    best[start_idx] = 0.0
    # entries carry their g explicitly: recomputing it as f - h loses ulps and
    # would drop live entries in the staleness check
    heap: list[tuple[float, float, int, float]] = [
        (h_table[start_idx], h_table[start_idx], start_idx, 0.0)]

    while heap:
        f, h, idx, g = heapq.heappop(heap)
        if g > best[idx]:
            continue
        if idx == goal_idx:
            break
        iy, ix = divmod(idx, width)
        a = straight[idx]
        b = diagonal[idx]
        for dy, dx, diag in NEIGHBORS:
            ny = iy + dy
            nx = ix + dx
            if not (0 <= ny < height and 0 <= nx < width):
                continue
            nidx = ny * width + nx
            if lethal[nidx]:
                continue
            w = weights[nidx]
            if diag:
                na, nb = a, b + w
            else:
                na, nb = a + w, b
            ng = na + SQRT2 * nb
            if ng < best[nidx]:
                best[nidx] = ng
                straight[nidx] = na
                diagonal[nidx] = nb
                parent[nidx] = idx
                nh = h_table[nidx]
                heapq.heappush(heap, (ng + nh, nh, nidx, ng))
    else:
        raise NoPathError("goal is unreachable through non-lethal cells")
    if not math.isfinite(best[goal_idx]):
        raise NoPathError("goal is unreachable through non-lethal cells")

    chain = [goal_idx]
    while chain[-1] != start_idx:
        chain.append(int(parent[chain[-1]]))
    chain.reverse()
    return _path_from_chain(chain, cm, (straight[goal_idx], diagonal[goal_idx]))


def _path_from_chain(chain: list[int], cm: Costmap, pair: tuple[float, float]) -> GlobalPath:
    spec = cm.spec
    width = spec.width
    cells = np.array([(idx % width, idx // width) for idx in chain], dtype=np.int64)
    points = np.empty((len(chain), 2), dtype=np.float64)
    points[:, 0] = spec.origin_x + cells[:, 0] * spec.resolution
    points[:, 1] = spec.origin_y + cells[:, 1] * spec.resolution
    seg = np.hypot(np.diff(points[:, 0]), np.diff(points[:, 1]))
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    cost = spec.resolution * (pair[0] + SQRT2 * pair[1]) / 255.0
    return GlobalPath(points=points, cells=cells, cum_arc=cum, cost=cost,
                      cost_pair=(float(pair[0]), float(pair[1])))


def path_cost_pair(path: GlobalPath, costmap: Costmap, weight: float = 20.0,
                   from_index: int = 0) -> tuple[float, float]:
    """Exact (straight, diagonal) weight sums of a path suffix, recomputed
    from the costmap; independent of the bookkeeping done during search."""
    weights = _cell_weights(costmap, weight)
    a = 0.0
    b = 0.0
    for i in range(from_index + 1, len(path)):
        ix, iy = path.cells[i]
        px, py = path.cells[i - 1]
        w = weights[iy, ix]
        if abs(int(ix) - int(px)) + abs(int(iy) - int(py)) == 2:
            b += w
        else:
            a += w
    return (a, b)


def closest_point(path: GlobalPath, x: float, y: float) -> tuple[tuple[float, float], float, int]:
    """Euclidean-closest path vertex; ties resolve to the smaller arc position.

    Returns (point, arc position, vertex index).
    """
    if len(path) == 0:
        raise ValueError("path is empty")
    d2 = (path.points[:, 0] - x) ** 2 + (path.points[:, 1] - y) ** 2
    i = int(np.argmin(d2))    # argmin returns the first minimum: smallest arc
    return ((float(path.points[i, 0]), float(path.points[i, 1])), float(path.cum_arc[i]), i)
