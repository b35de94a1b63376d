"""Deterministic 2D telepresence-robot navigation simulator.

Shared control steers the planner through a user-placed costmap valley;
control switching toggles between direct joystick drive and autonomy. Both
run over the same tick engine with a 1-second input delay line.
"""
from .config import SimConfig, load_config
from .controller import ControlMode, JoystickState, NEUTRAL
from .costmap import CostFilterParams, CostFrame, Costmap, GridSpec
from .planner import GlobalPath, NoPathError, PlanRequest, plan
from .scenario import Engine, RunRecord, TraceEvent, load_trace, run, save_trace
from .sim import ControlInput, RobotState, step_kinematics
from .world import WorldModel, load_world, save_world

__version__ = "0.1.0"

__all__ = [
    "ControlInput",
    "ControlMode",
    "CostFilterParams",
    "CostFrame",
    "Costmap",
    "Engine",
    "GlobalPath",
    "GridSpec",
    "JoystickState",
    "NEUTRAL",
    "NoPathError",
    "PlanRequest",
    "RobotState",
    "RunRecord",
    "SimConfig",
    "TraceEvent",
    "WorldModel",
    "load_config",
    "load_trace",
    "load_world",
    "plan",
    "run",
    "save_trace",
    "save_world",
    "step_kinematics",
    "__version__",
]
