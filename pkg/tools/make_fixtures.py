"""Generate the bundled worlds and traces, validating each pairing end to end."""
from __future__ import annotations

import json
import sys
import time
from pathlib import Path

from sharenav.config import SimConfig
from sharenav.controller import ControlMode, JoystickState
from sharenav.scenario import TraceEvent, run, save_trace
from sharenav.world import Obstacle, Pool, WorldModel, load_world, save_world

ROOT = Path(__file__).resolve().parents[1]
WORLDS = ROOT / "src" / "sharenav" / "worlds"
TRACES = ROOT / "src" / "sharenav" / "traces"


def circle(name, cx, cy, r, a_priori=True):
    return Obstacle(name=name, shape="circle", center=(cx, cy), radius=r, a_priori=a_priori)


def box(name, x0, y0, x1, y1, a_priori=True):
    return Obstacle(name=name, shape="polygon",
                    points=((x0, y0), (x1, y0), (x1, y1), (x0, y1)), a_priori=a_priori)


def pool(name, cx, cy, r, intensity=1.0, fade=3.0):
    return Pool(name=name, center=(cx, cy), radius=r, intensity=intensity, fade=fade)


def open_world() -> WorldModel:
    return WorldModel(
        bounds=(0, 0, 30, 20), start=(2.0, 10.0, 0.0), goal=(27.0, 10.0),
        obstacles=(circle("tree_1", 8.0, 16.0, 0.4), circle("tree_2", 20.0, 4.0, 0.4)),
        pools=(pool("pool_1", 14.0, 8.2, 1.0),),
    )


def corridor_world() -> WorldModel:
    return WorldModel(
        bounds=(0, 0, 30, 8), start=(2.5, 4.0, 0.0), goal=(27.5, 4.0),
        obstacles=(
            box("wall_south", 1.0, 1.0, 29.0, 1.6),
            box("wall_north", 1.0, 6.4, 29.0, 7.0),
            circle("person_1", 15.0, 4.0, 0.3, a_priori=False),
        ),
        pools=(pool("pool_1", 9.0, 3.4, 0.8), pool("pool_2", 21.0, 4.6, 0.8)),
    )


def forest_world() -> WorldModel:
    trees = [
        (4.5, 6.5, 0.45), (5.0, 17.5, 0.4), (7.5, 9.0, 0.35), (8.0, 21.5, 0.5),
        (10.0, 4.0, 0.45), (10.5, 15.5, 0.4), (12.0, 8.5, 0.35), (13.0, 20.0, 0.5),
        (14.0, 15.0, 0.3), (15.0, 5.0, 0.45), (16.0, 9.5, 0.4), (17.0, 18.5, 0.35),
        (18.5, 14.5, 0.45), (19.0, 3.5, 0.4), (20.5, 9.0, 0.35), (21.0, 20.5, 0.5),
        (23.0, 15.5, 0.4), (24.0, 5.5, 0.45), (25.5, 9.5, 0.3), (26.0, 18.0, 0.4),
        (28.0, 7.0, 0.45), (28.5, 15.0, 0.35),
    ]
    obstacles = [circle(f"tree_{i + 1}", x, y, r) for i, (x, y, r) in enumerate(trees)]
    obstacles.append(box("shed", 6.0, 16.0, 9.0, 19.0))
    obstacles.append(box("depot", 22.0, 4.0, 26.0, 7.0))
    obstacles.append(circle("person_1", 10.0, 12.6, 0.3, a_priori=False))
    obstacles.append(circle("person_2", 17.0, 11.4, 0.3, a_priori=False))
    obstacles.append(circle("person_3", 24.0, 12.5, 0.3, a_priori=False))
    pools = (
        pool("pool_1", 7.0, 12.8, 0.8), pool("pool_2", 13.0, 11.2, 0.9),
        pool("pool_3", 19.5, 12.7, 0.8), pool("pool_4", 26.5, 11.3, 0.7),
        pool("pool_5", 15.5, 13.6, 0.6),
    )
    return WorldModel(bounds=(0, 0, 32, 24), start=(2.0, 12.0, 0.0), goal=(30.0, 12.0),
                      obstacles=tuple(obstacles), pools=pools)


def slalom_world() -> WorldModel:
    return WorldModel(
        bounds=(0, 0, 28, 16), start=(2.0, 8.0, 0.0), goal=(26.0, 8.0),
        obstacles=(
            circle("post_1", 9.0, 8.3, 0.7),
            circle("post_2", 14.0, 7.6, 0.7),
            circle("post_3", 19.0, 8.4, 0.7),
            circle("person_1", 23.5, 8.0, 0.3, a_priori=False),
        ),
        pools=(pool("pool_1", 11.5, 7.2, 0.7), pool("pool_2", 16.5, 8.8, 0.7)),
    )


def traces() -> dict[str, list[TraceEvent]]:
    j = JoystickState
    return {
        "null": [],
        "stop": [TraceEvent(0.0, j(jx=0.0, jy=-1.0, trigger=False))],
        "speed": [
            TraceEvent(1.0, j(jx=0.0, jy=1.0, trigger=False)),
            TraceEvent(6.0, j(jx=0.0, jy=-0.5, trigger=False)),
            TraceEvent(10.0, j(jx=0.0, jy=0.0, trigger=False)),
        ],
        "sc_right": [
            TraceEvent(2.0, j(jx=0.0, jy=0.0, trigger=True)),
            TraceEvent(2.6, j(jx=0.5, jy=0.0, trigger=True)),
            TraceEvent(4.0, j(jx=0.5, jy=0.0, trigger=False)),
            TraceEvent(12.0, j(jx=0.0, jy=0.0, trigger=True)),
            TraceEvent(13.4, j(jx=-0.4, jy=0.0, trigger=True)),
            TraceEvent(14.6, j(jx=-0.4, jy=0.0, trigger=False)),
        ],
        "cs_drive": [
            TraceEvent(2.0, j(jx=0.0, jy=0.0, trigger=True)),
            TraceEvent(2.4, j(jx=0.25, jy=0.1, trigger=True)),
            TraceEvent(3.8, j(jx=-0.2, jy=0.1, trigger=True)),
            TraceEvent(5.0, j(jx=0.0, jy=0.0, trigger=False)),
        ],
    }


PAIRS = [
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


def main() -> int:
    WORLDS.mkdir(parents=True, exist_ok=True)
    TRACES.mkdir(parents=True, exist_ok=True)
    worlds = {"open": open_world(), "corridor": corridor_world(),
              "forest": forest_world(), "slalom": slalom_world()}
    for name, world in worlds.items():
        save_world(world, WORLDS / f"{name}.world")
        load_world(WORLDS / f"{name}.world")
    all_traces = traces()
    for name, events in all_traces.items():
        save_trace(events, TRACES / f"{name}.trace.jsonl")

    cfg = SimConfig()
    ok = True
    for wname, tname, mode in PAIRS:
        t0 = time.perf_counter()
        rec = run(worlds[wname], ControlMode(mode), all_traces[tname], cfg)
        wall = time.perf_counter() - t0
        s = rec.summary
        status = "ok" if (s.completed and (s.min_clearance is None or s.min_clearance >= 0)) else "FAIL"
        if status == "FAIL":
            ok = False
        print(f"{status} {wname:9s} {tname:9s} {mode}: t={s.completion_time:7.2f}s "
              f"rad={s.cumulative_radiation:7.3f} clr={s.min_clearance} wall={wall:5.2f}s")
    # the deliberate timeout fixture
    rec = run(worlds["open"], ControlMode.CONTROL_SWITCHING, all_traces["stop"], cfg)
    print(f"stop fixture: timed_out={rec.summary.timed_out} "
          f"moved={max(abs(r.x - 2.0) for r in rec.rows):.3f}m")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
