"""Run orchestration: the tick engine, input traces, run records and metrics.

The engine is strictly single-threaded and tick-driven. External inputs enter
through the delay line at tick boundaries; everything else (sensing, replans,
arbitration, integration) happens inside tick() in a fixed order, so a run is
a pure function of (world, mode, trace, config).
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .config import SimConfig
from .controller import (
    ControlMode,
    JoystickState,
    NEUTRAL,
    arbitrate,
    filter_offset_on_release,
    track_path,
)
from .costmap import (
    CostFilterParams,
    CostFrame,
    Costmap,
    GridSpec,
    compose_costmap,
    fit_path_direction,
    inflate_obstacles,
    make_cost_frame,
    obstacle_cost_grid,
)
from .planner import GlobalPath, NoPathError, PlanRequest, closest_point, plan
from .sim import (
    STOP,
    TIME_EPS,
    ControlInput,
    DelayLine,
    RobotState,
    SensedObstacles,
    SimClock,
    initial_sensed,
    pool_distance,
    radiation_at,
    sense,
    step_kinematics,
)
from .world import WorldModel

# Replan off-schedule state: skip a scheduled search when nothing changed and
# the robot is still this close to the current path (its suffix stays optimal).
STRAY_DISTANCE = 0.4


class TraceError(Exception):
    pass


@dataclass(frozen=True)
class TraceEvent:
    t: float
    joystick: JoystickState

    def as_dict(self) -> dict:
        return {"t": self.t, "jx": self.joystick.jx, "jy": self.joystick.jy,
                "trigger": self.joystick.trigger}


def validate_trace(events: Sequence[TraceEvent]) -> None:
    for prev, cur in zip(events, events[1:]):
        if cur.t <= prev.t:
            raise TraceError(f"trace timestamps must be strictly increasing (at t={cur.t})")


def load_trace(path: str | Path) -> list[TraceEvent]:
    """Read a JSON-lines trace: one {"t", "jx", "jy", "trigger"} object per line."""
    events: list[TraceEvent] = []
    p = Path(path)
    try:
        lines = p.read_text().splitlines()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read trace file {p}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceError(f"{p}:{lineno}: not valid JSON: {exc}") from exc
        try:
            events.append(TraceEvent(
                t=float(doc["t"]),
                joystick=JoystickState(jx=float(doc.get("jx", 0.0)),
                                       jy=float(doc.get("jy", 0.0)),
                                       trigger=bool(doc.get("trigger", False))),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise TraceError(f"{p}:{lineno}: bad event: {exc}") from exc
    validate_trace(events)
    return events


def save_trace(events: Iterable[TraceEvent], path: str | Path) -> None:
    with Path(path).open("w") as fh:
        for ev in events:
            fh.write(json.dumps(ev.as_dict(), separators=(",", ":")) + "\n")


@dataclass(frozen=True)
class TickRow:
    """State at the start of a tick plus the control applied over it."""
    t: float
    x: float
    y: float
    theta: float
    v: float
    omega: float
    jx: float
    jy: float
    trigger: bool
    mode: str
    filter: CostFilterParams | None
    radiation: float
    pool_distance: float | None
    clearance: float | None

    def as_dict(self) -> dict:
        return {
            "type": "tick", "t": self.t, "x": self.x, "y": self.y,
            "theta": self.theta, "v": self.v, "omega": self.omega,
            "jx": self.jx, "jy": self.jy, "trigger": self.trigger,
            "mode": self.mode,
            "filter": self.filter.as_dict() if self.filter else None,
            "radiation": self.radiation, "pool_distance": self.pool_distance,
            "clearance": self.clearance,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TickRow":
        filt = doc.get("filter")
        params = None
        if filt is not None:
            params = CostFilterParams(offset=filt["d"], width=filt["w"], length=filt["l"],
                                      strength=filt["s"], side_gain=filt["p"])
        return cls(
            t=doc["t"], x=doc["x"], y=doc["y"], theta=doc["theta"],
            v=doc["v"], omega=doc["omega"], jx=doc["jx"], jy=doc["jy"],
            trigger=doc["trigger"], mode=doc["mode"], filter=params,
            radiation=doc["radiation"], pool_distance=doc.get("pool_distance"),
            clearance=doc.get("clearance"),
        )


@dataclass(frozen=True)
class RunSummary:
    completed: bool
    timed_out: bool
    completion_time: float
    cumulative_radiation: float
    min_clearance: float | None
    ticks: int
    dt: float
    mode: str
    radiation_metric: str

    def as_dict(self) -> dict:
        return {
            "type": "summary", "completed": self.completed,
            "timed_out": self.timed_out, "completion_time": self.completion_time,
            "cumulative_radiation": self.cumulative_radiation,
            "min_clearance": self.min_clearance, "ticks": self.ticks,
            "dt": self.dt, "mode": self.mode,
            "radiation_metric": self.radiation_metric,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RunSummary":
        return cls(
            completed=doc["completed"], timed_out=doc["timed_out"],
            completion_time=doc["completion_time"],
            cumulative_radiation=doc["cumulative_radiation"],
            min_clearance=doc.get("min_clearance"), ticks=doc["ticks"],
            dt=doc["dt"], mode=doc["mode"],
            radiation_metric=doc["radiation_metric"],
        )


@dataclass
class RunRecord:
    rows: list[TickRow]
    summary: RunSummary

    def to_jsonl(self) -> str:
        lines = [json.dumps(r.as_dict(), separators=(",", ":")) for r in self.rows]
        lines.append(json.dumps(self.summary.as_dict(), separators=(",", ":")))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "RunRecord":
        rows: list[TickRow] = []
        summary: RunSummary | None = None
        for line in text.splitlines():
            if not line.strip():
                continue
            doc = json.loads(line)
            if doc.get("type") == "summary":
                summary = RunSummary.from_dict(doc)
            else:
                rows.append(TickRow.from_dict(doc))
        if summary is None:
            raise ValueError("record has no summary line")
        return cls(rows=rows, summary=summary)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl())

    @classmethod
    def read(cls, path: str | Path) -> "RunRecord":
        return cls.from_jsonl(Path(path).read_text())


def _radiation_integrand(row: TickRow, metric: str) -> float:
    if metric == "distance":
        return row.pool_distance if row.pool_distance is not None else 0.0
    return row.radiation


def cumulative_radiation(rows: Sequence[TickRow], dt: float,
                         metric: str = "intensity") -> float:
    """Left Riemann sum over all but the terminal row; plain left-to-right
    accumulation so it reproduces the engine's running total bit for bit."""
    total = 0.0
    for row in rows[:-1]:
        total += _radiation_integrand(row, metric) * dt
    return total


def min_clearance(rows: Sequence[TickRow]) -> float | None:
    values = [r.clearance for r in rows if r.clearance is not None]
    return min(values) if values else None


def summarize(rows: Sequence[TickRow], *, completed: bool, timed_out: bool,
              cfg: SimConfig, mode: ControlMode) -> RunSummary:
    return RunSummary(
        completed=completed,
        timed_out=timed_out,
        completion_time=rows[-1].t - rows[0].t,
        cumulative_radiation=cumulative_radiation(rows, cfg.dt, cfg.radiation_metric),
        min_clearance=min_clearance(rows),
        ticks=len(rows) - 1,
        dt=cfg.dt,
        mode=mode.value,
        radiation_metric=cfg.radiation_metric,
    )


class Engine:
    """Tick-by-tick simulation of one run.

    Drive it with push_input() (timestamps non-decreasing) and tick(); state
    handed out through snapshot() is a plain-data copy.
    """

    def __init__(self, world: WorldModel, mode: ControlMode, config: SimConfig | None = None):
        self.world = world
        self.mode = mode
        self.cfg = config or SimConfig()
        self.clock = SimClock(self.cfg.dt)
        sx, sy, sth = world.start
        self.state = RobotState(sx, sy, sth)
        self.known: SensedObstacles = initial_sensed(world, self.cfg.sensor_range)
        self.delay: DelayLine[JoystickState] = DelayLine(self.cfg.input_latency, NEUTRAL)
        self.grid = GridSpec.from_bounds(world.bounds, self.cfg.resolution)
        self.joystick = NEUTRAL
        self.active_filter: tuple[CostFrame, CostFilterParams] | None = None
        self.path: GlobalPath | None = None
        self.costmap: Costmap | None = None
        self.done = False
        self.timed_out = False
        self.rows: list[TickRow] = []
        self.cum_radiation = 0.0
        self._inflation = self.cfg.robot_radius + self.cfg.inflation_margin
        self._dirty = True
        self._last_input_t = -math.inf
        self._max_ticks = math.ceil(self.cfg.timeout / self.cfg.dt)

    # -- inputs ------------------------------------------------------------

    def push_input(self, t: float, j: JoystickState) -> None:
        """Queue a joystick sample; it matures input_latency seconds after t."""
        t = max(t, self._last_input_t)
        self._last_input_t = t
        self.delay.push(t, j)

    # -- planning ----------------------------------------------------------

    def _place_filter(self, offset: float) -> None:
        cfg = self.cfg
        params = CostFilterParams(offset=offset, width=cfg.filter_width,
                                  length=cfg.filter_length, strength=cfg.filter_strength,
                                  side_gain=cfg.filter_side_gain)
        q = self.state
        if self.path is not None and len(self.path) >= 2:
            direction = fit_path_direction(self.path.points, q.x, q.y, q.theta)
        else:
            direction = q.heading
        frame = make_cost_frame(q.x, q.y, q.theta, offset, direction)
        self.active_filter = (frame, params)
        self._dirty = True

    def _filter_expired(self) -> bool:
        if self.active_filter is None or self.path is None or len(self.path) == 0:
            return False
        frame, params = self.active_filter
        (px, py), _, _ = closest_point(self.path, self.state.x, self.state.y)
        ya = frame.y_axis
        progress = (px - frame.origin[0]) * ya[0] + (py - frame.origin[1]) * ya[1]
        return progress > params.length

    def _rebuild_costmap(self) -> None:
        obstacles = [self.world.obstacles[i] for i in self.known.ordered()]
        if obstacles:
            mask = inflate_obstacles(obstacles, self._inflation, self.grid)
        else:
            mask = np.zeros((self.grid.height, self.grid.width), dtype=bool)
        base = obstacle_cost_grid(mask, self.grid, self.cfg.decay_rate)
        self.costmap = compose_costmap(base, self.active_filter)
        self._dirty = False

    def _replan(self) -> None:
        if self._dirty or self.costmap is None:
            self._rebuild_costmap()
        try:
            self.path = plan(
                PlanRequest(start=self.state.position, goal=self.world.goal,
                            costmap=self.costmap),
                weight=self.cfg.cost_weight,
            )
        except NoPathError:
            # stop and retry on the next scheduled replan; sensing may free it
            self.path = None

    def _strayed(self) -> bool:
        if self.path is None or len(self.path) == 0:
            return True
        (px, py), _, _ = closest_point(self.path, self.state.x, self.state.y)
        return math.hypot(px - self.state.x, py - self.state.y) > STRAY_DISTANCE

    def _arrived(self) -> bool:
        # The tracker halts relative to the planned goal cell, which sits up to
        # half a cell diagonal from the requested goal point; accept either.
        gx, gy = self.world.goal
        if math.hypot(self.state.x - gx, self.state.y - gy) <= self.cfg.goal_tolerance:
            return True
        if self.path is not None and len(self.path) > 0:
            ex, ey = self.path.end
            return math.hypot(self.state.x - ex, self.state.y - ey) <= self.cfg.goal_tolerance
        return False

    # -- stepping ----------------------------------------------------------

    def _row(self, t: float, q: RobotState, u: ControlInput, j: JoystickState) -> TickRow:
        return TickRow(
            t=t, x=q.x, y=q.y, theta=q.theta, v=u.v, omega=u.omega,
            jx=j.jx, jy=j.jy, trigger=j.trigger, mode=self.mode.value,
            filter=self.active_filter[1] if self.active_filter else None,
            radiation=radiation_at(self.world, q.x, q.y),
            pool_distance=pool_distance(self.world, q.x, q.y),
            clearance=self.world.clearance(q.x, q.y, self.cfg.robot_radius),
        )

    def tick(self) -> TickRow:
        """Advance one dt: sense, apply delayed input, replan if due, arbitrate,
        integrate. Returns the row logged for this tick."""
        if self.done:
            raise RuntimeError("engine already finished")
        cfg = self.cfg
        t = self.clock.time

        new_known = sense(self.world, self.state, self.known)
        if new_known is not self.known:
            self.known = new_known
            self._dirty = True

        j = self.delay.poll(t)
        replan_now = False
        if self.mode is ControlMode.SHARED_CONTROL:
            offset = filter_offset_on_release(self.joystick, j)
            if offset is not None:
                self._place_filter(offset)
                replan_now = True
        self.joystick = j

        if self._filter_expired():
            self.active_filter = None
            self._dirty = True

        scheduled = self.clock.tick % cfg.replan_stride == 0
        if replan_now or (scheduled and (self.path is None or self._dirty or self._strayed())):
            self._replan()

        u_auto = track_path(self.state, self.path, cfg.lookahead, cfg.cruise_speed,
                            cfg.goal_tolerance, cfg.decel_distance)
        u = arbitrate(self.mode, j, u_auto, cfg.turn_mapping)

        row = self._row(t, self.state, u, j)
        self.rows.append(row)
        self.cum_radiation += _radiation_integrand(row, cfg.radiation_metric) * cfg.dt

        self.state = step_kinematics(self.state, u, cfg.dt)
        self.clock = self.clock.advanced()

        if self._arrived():
            self.done = True
        elif self.clock.tick >= self._max_ticks:
            self.done = True
            self.timed_out = True
        if self.done:
            self.rows.append(self._row(self.clock.time, self.state, STOP, j))
        return row

    def record(self) -> RunRecord:
        if not self.done:
            raise RuntimeError("run not finished")
        summary = summarize(self.rows, completed=not self.timed_out,
                            timed_out=self.timed_out, cfg=self.cfg, mode=self.mode)
        return RunRecord(rows=list(self.rows), summary=summary)

    # -- wire snapshots ----------------------------------------------------

    def snapshot(self) -> dict:
        q = self.state
        return {
            "tick": self.clock.tick,
            "t": self.clock.time,
            "pose": {"x": q.x, "y": q.y, "theta": q.theta},
            "u": {"v": q.v_actual, "omega": q.omega_actual},
            "joystick": {"jx": self.joystick.jx, "jy": self.joystick.jy,
                         "trigger": self.joystick.trigger},
            "path": [] if self.path is None else self.path.points.tolist(),
            "filter": None if self.active_filter is None else {
                **self.active_filter[1].as_dict(),
                "frame": self.active_filter[0].as_dict(),
            },
            "sensed": self.known.ordered(),
            "radiation": radiation_at(self.world, q.x, q.y),
            "cum_radiation": self.cum_radiation,
            "done": self.done,
            "timed_out": self.timed_out,
        }

    def costmap_message(self) -> dict:
        if self.costmap is None:
            self._rebuild_costmap()
        cm = self.costmap
        return {
            "header": {
                "origin": [cm.spec.origin_x, cm.spec.origin_y],
                "resolution": cm.spec.resolution,
                "width": cm.spec.width,
                "height": cm.spec.height,
            },
            "cells": cm.cells.ravel().tolist(),
        }


def run(world: WorldModel, mode: ControlMode, trace: Sequence[TraceEvent] = (),
        config: SimConfig | None = None) -> RunRecord:
    """Execute a scripted run to the goal or timeout; deterministic.

    A timeout is recorded in the summary rather than raised, so partial runs
    keep their rows.
    """
    validate_trace(list(trace))
    engine = Engine(world, mode, config)
    pending = deque(trace)
    while not engine.done:
        now = engine.clock.time
        while pending and pending[0].t <= now + TIME_EPS:
            ev = pending.popleft()
            engine.push_input(ev.t, ev.joystick)
        engine.tick()
    return engine.record()
