"""Joystick mappings, pure-pursuit path tracking, and control-mode arbitration.

Two modes share one autonomous tracker. Control switching hands the raw
joystick mapping to the base while the trigger is held; shared control always
executes the tracker's command and lets the trigger place a costmap valley
instead, with the speed lever capping both modes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .planner import GlobalPath, closest_point
from .sim import ControlInput, RobotState, STOP


def _clamp(v: float, lo: float, hi: float) -> float:
    return min(max(v, lo), hi)


@dataclass(frozen=True)
class JoystickState:
    """Stick x, speed lever y (both in [-1, 1]), trigger and mode buttons."""
    jx: float = 0.0
    jy: float = 0.0
    trigger: bool = False
    mode_button: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "jx", _clamp(self.jx, -1.0, 1.0))
        object.__setattr__(self, "jy", _clamp(self.jy, -1.0, 1.0))


NEUTRAL = JoystickState()


class ControlMode(str, Enum):
    SHARED_CONTROL = "sc"
    CONTROL_SWITCHING = "cs"


def user_speed_limit(jy: float) -> float:
    """Speed-lever mapping: 1 m/s at center, 1.5 m/s at the top, stop at the
    bottom. Caps the autonomous speed in both modes."""
    return 1.0 + 0.5 * jy if jy > 0 else 1.0 + jy


def user_turn_rate(jx: float, jy: float, mapping: str = "multiplicative") -> float:
    """Steering mapping; slower lever lowers the turn rate so low-speed
    steering stays gentle.

    The "additive" variant is the as-printed form (jx + 0.8*jy for jy <= 0);
    it turns even with the stick centered, so it is off by default.
    """
    if jy > 0:
        return jx
    if mapping == "additive":
        return jx + 0.8 * jy
    return jx * (1.0 + 0.8 * jy)


def turn_rate_limit(jy: float) -> float:
    """Shared-control omega cap: the turn mapping at full stick deflection."""
    return 1.0 if jy > 0 else 1.0 + 0.8 * jy


def map_user_velocity(j: JoystickState, mapping: str = "multiplicative") -> tuple[float, float]:
    return (user_speed_limit(j.jy), user_turn_rate(j.jx, j.jy, mapping))


def track_path(q: RobotState, path: GlobalPath | None, lookahead: float = 0.8,
               cruise: float = 1.0, goal_tolerance: float = 0.5,
               decel_distance: float = 1.5) -> ControlInput:
    """Pure pursuit toward the point `lookahead` meters of arc beyond the
    closest path vertex; slows linearly inside decel_distance of the path end
    and stops inside goal_tolerance."""
    if path is None or len(path) == 0:
        return STOP
    end = path.end
    dist_goal = math.hypot(end[0] - q.x, end[1] - q.y)
    if dist_goal <= goal_tolerance:
        return STOP
    _, arc, _ = closest_point(path, q.x, q.y)
    target_arc = arc + lookahead
    i = int(min(len(path) - 1, path.cum_arc.searchsorted(target_arc)))
    tx, ty = path.points[i]
    alpha = math.atan2(ty - q.y, tx - q.x) - q.theta
    v = cruise * min(1.0, dist_goal / decel_distance)
    omega = 2.0 * v * math.sin(alpha) / lookahead
    return ControlInput(v, omega)


def arbitrate(mode: ControlMode, j: JoystickState, u_auto: ControlInput,
              mapping: str = "multiplicative") -> ControlInput:
    """Combine the delayed joystick state with the tracker command.

    Control switching: trigger held hands over the raw joystick mapping;
    otherwise autonomous with the lever capping speed. Shared control: always
    autonomous, lever capping speed and the stick's full-deflection turn rate
    bounding omega; the raw mapping is never forwarded.
    """
    if mode is ControlMode.CONTROL_SWITCHING:
        if j.trigger:
            v_h, omega_h = map_user_velocity(j, mapping)
            return ControlInput(v_h, omega_h)
        return ControlInput(min(u_auto.v, user_speed_limit(j.jy)), u_auto.omega)
    cap = turn_rate_limit(j.jy)
    return ControlInput(
        min(u_auto.v, user_speed_limit(j.jy)),
        _clamp(u_auto.omega, -cap, cap),
    )


def filter_offset_on_release(prev: JoystickState, cur: JoystickState) -> float | None:
    """Shared-control placement event: on a trigger release edge the stick
    position sets the valley offset (5 m at full deflection)."""
    if prev.trigger and not cur.trigger:
        return 5.0 * cur.jx
    return None
