"""Robot kinematics, fixed-step clock, input delay line, sensing and radiation."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Generic, TypeVar

from .world import WorldModel

# Actuation limits of the simulated base (admissible control set).
V_MAX = 1.5         # m/s
OMEGA_MAX = 1.0     # rad/s

# Events within this window of a tick boundary count as on the boundary,
# absorbing float noise in t = tick * dt products.
TIME_EPS = 1e-9

T = TypeVar("T")


def wrap_angle(theta: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    th = math.remainder(theta, math.tau)
    if th <= -math.pi:
        th += math.tau
    return th


@dataclass(frozen=True)
class RobotState:
    """Unicycle configuration plus the velocities applied on the last step."""
    x: float
    y: float
    theta: float
    v_actual: float = 0.0
    omega_actual: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)

    @property
    def heading(self) -> tuple[float, float]:
        return (math.cos(self.theta), math.sin(self.theta))


@dataclass(frozen=True)
class ControlInput:
    """Commanded (v, omega), clamped to the admissible set on construction."""
    v: float
    omega: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "v", min(max(self.v, 0.0), V_MAX))
        object.__setattr__(self, "omega", min(max(self.omega, -OMEGA_MAX), OMEGA_MAX))


STOP = ControlInput(0.0, 0.0)


def step_kinematics(q: RobotState, u: ControlInput, dt: float) -> RobotState:
    """Advance the unicycle one step: forward-Euler position, heading rewrapped."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    return RobotState(
        x=q.x + u.v * math.cos(q.theta) * dt,
        y=q.y + u.v * math.sin(q.theta) * dt,
        theta=q.theta + u.omega * dt,
        v_actual=u.v,
        omega_actual=u.omega,
    )


@dataclass(frozen=True)
class SimClock:
    """Tick counter; time is always derived as tick * dt, never accumulated."""
    dt: float = 0.05
    tick: int = 0

    @property
    def time(self) -> float:
        return self.tick * self.dt

    def advanced(self) -> "SimClock":
        return SimClock(self.dt, self.tick + 1)


class DelayLine(Generic[T]):
    """FIFO that releases each pushed item `latency` seconds after its push time.

    poll() returns the most recent matured item, so the payload behaves as a
    sampled level (joystick position), not as discrete pulses.
    """

    def __init__(self, latency: float, neutral: T):
        if latency < 0:
            raise ValueError("latency must be >= 0")
        self.latency = latency
        self._neutral = neutral
        self._queue: deque[tuple[float, T]] = deque()
        self._current = neutral
        self._last_push = -math.inf

    def push(self, t: float, item: T) -> None:
        if t < self._last_push - TIME_EPS:
            raise ValueError("push times must be non-decreasing")
        self._last_push = max(self._last_push, t)
        self._queue.append((t, item))

    def poll(self, t: float) -> T:
        while self._queue and self._queue[0][0] + self.latency <= t + TIME_EPS:
            self._current = self._queue.popleft()[1]
        return self._current

    def reset(self) -> None:
        self._queue.clear()
        self._current = self._neutral
        self._last_push = -math.inf


@dataclass(frozen=True)
class SensedObstacles:
    """Indices into world.obstacles known to the robot; grows monotonically."""
    indices: frozenset[int]
    sensor_range: float

    def ordered(self) -> list[int]:
        return sorted(self.indices)


def initial_sensed(world: WorldModel, sensor_range: float) -> SensedObstacles:
    known = frozenset(i for i, o in enumerate(world.obstacles) if o.a_priori)
    return SensedObstacles(known, sensor_range)


def sense(world: WorldModel, q: RobotState, known: SensedObstacles) -> SensedObstacles:
    """Add every obstacle whose boundary is within sensor range; never forgets."""
    found = set(known.indices)
    for i, obs in enumerate(world.obstacles):
        if i in found:
            continue
        if obs.distance(q.x, q.y) <= known.sensor_range:
            found.add(i)
    if len(found) == len(known.indices):
        return known
    return SensedObstacles(frozenset(found), known.sensor_range)


def radiation_at(world: WorldModel, x: float, y: float) -> float:
    """Summed pool intensity at a point (full inside a pool, linear fade outside)."""
    return sum(p.intensity_at(x, y) for p in world.pools)


def pool_distance(world: WorldModel, x: float, y: float) -> float | None:
    """Distance to the edge of the closest pool; None when the world has none."""
    if not world.pools:
        return None
    return min(p.distance(x, y) for p in world.pools)
