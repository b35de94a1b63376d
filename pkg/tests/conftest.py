from __future__ import annotations

import sys
from importlib.resources import files
from pathlib import Path

import pytest

from sharenav.scenario import TraceEvent, load_trace
from sharenav.world import WorldModel, load_world

sys.path.insert(0, str(Path(__file__).parent))   # make tests/oracle.py importable

WORLD_DIR = files("sharenav") / "worlds"
TRACE_DIR = files("sharenav") / "traces"

# The bundled scenario manifest exercised by the safety acceptance criterion.
BUNDLED_PAIRS: list[tuple[str, str, str]] = [
    ("open", "null", "sc"), ("open", "null", "cs"),
    ("corridor", "null", "sc"), ("corridor", "null", "cs"),
    ("forest", "null", "sc"), ("forest", "null", "cs"),
    ("slalom", "null", "sc"), ("slalom", "null", "cs"),
    ("open", "sc_right", "sc"), ("corridor", "sc_right", "sc"),
    ("forest", "sc_right", "sc"), ("slalom", "sc_right", "sc"),
    ("open", "cs_drive", "cs"), ("corridor", "cs_drive", "cs"),
    ("forest", "cs_drive", "cs"), ("slalom", "cs_drive", "cs"),
    ("open", "speed", "sc"), ("corridor", "speed", "cs"),
    ("forest", "speed", "sc"), ("slalom", "speed", "cs"),
]
STOP_FIXTURE = ("open", "stop", "cs")


def bundled_world(name: str) -> WorldModel:
    return load_world(WORLD_DIR / f"{name}.world")


def bundled_trace(name: str) -> list[TraceEvent]:
    return load_trace(TRACE_DIR / f"{name}.trace.jsonl")


@pytest.fixture()
def open_world() -> WorldModel:
    return bundled_world("open")


@pytest.fixture()
def corridor_world() -> WorldModel:
    return bundled_world("corridor")
