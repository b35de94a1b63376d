"""Command-line entry points: headless runs, static planning dumps, the live
session service, and report rendering."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, SimConfig, load_config
from .controller import ControlMode
from .costmap import (
    CostFilterParams,
    GridSpec,
    compose_costmap,
    dump_costmap,
    fit_path_direction,
    inflate_obstacles,
    make_cost_frame,
    obstacle_cost_grid,
)
from .planner import NoPathError, PlanRequest, plan
from .scenario import RunRecord, TraceError, load_trace, run
from .world import ParseError, ValidationError, load_world

EX_OK = 0
EX_ERROR = 1
EX_TIMEOUT = 2
EX_USAGE = 64
EX_NOFILE = 66


class CliError(Exception):
    def __init__(self, message: str, code: int = EX_ERROR):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse default exits with 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def build_parser() -> _Parser:
    parser = _Parser(prog="sharenav", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scripted run headlessly")
    p_run.add_argument("--world", required=True, help="world JSON file")
    p_run.add_argument("--mode", required=True, choices=["sc", "cs"])
    p_run.add_argument("--trace", help="JSON-lines input trace; omitted = no input")
    p_run.add_argument("--out", required=True, help="run record output (JSON lines)")
    p_run.add_argument("--config", help="JSON config overrides (default: $SHARENAV_CONFIG)")
    p_run.add_argument("--report", help="also render figures + CSVs into this directory")

    p_plan = sub.add_parser("plan", help="plan once on a world and dump the costmap")
    p_plan.add_argument("--world", required=True)
    p_plan.add_argument("--filter", dest="filter_spec",
                        help='valley parameters, e.g. "d=2.5,w=3,l=5,s=100,p=1.2"')
    p_plan.add_argument("--dump", help="write the composed costmap CSV (+ .json sidecar)")
    p_plan.add_argument("--path-out", help="write the planned path as x,y CSV")
    p_plan.add_argument("--fig", help="render the costmap and path to a PNG")
    p_plan.add_argument("--config", help="JSON config overrides")

    p_serve = sub.add_parser("serve", help="run a live WebSocket teleop session")
    p_serve.add_argument("--world", required=True)
    p_serve.add_argument("--mode", required=True, choices=["sc", "cs"])
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--rate", type=float, default=20.0, help="state frames per second")
    p_serve.add_argument("--fast", action="store_true",
                         help="run ticks as fast as possible instead of wall-clock pacing")
    p_serve.add_argument("--autostart", action="store_true")
    p_serve.add_argument("--config", help="JSON config overrides")

    p_report = sub.add_parser("report", help="render figures + CSVs from a run record")
    p_report.add_argument("--record", required=True, help="run record JSON-lines file")
    p_report.add_argument("--world", required=True)
    p_report.add_argument("--out-dir", required=True)

    return parser


def _checked_path(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"{what} file not found: {p}", EX_NOFILE)
    return p


def _load_config(path: str | None) -> SimConfig:
    if path is not None:
        _checked_path(path, "config")
    return load_config(path)


def parse_filter_spec(spec: str, cfg: SimConfig) -> CostFilterParams:
    """Parse "d=..,w=..,l=..,s=..,p=.." with config defaults for omitted keys."""
    values: dict[str, float] = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise CliError(f"bad filter component {part!r}; expected key=value")
        key, _, raw = part.partition("=")
        key = key.strip()
        if key not in ("d", "w", "l", "s", "p"):
            raise CliError(f"unknown filter key {key!r}; expected d, w, l, s or p")
        try:
            values[key] = float(raw)
        except ValueError:
            raise CliError(f"filter value for {key!r} is not a number: {raw!r}") from None
    if "d" not in values:
        raise CliError("filter spec needs at least d=<offset>")
    try:
        return CostFilterParams(
            offset=values["d"],
            width=values.get("w", cfg.filter_width),
            length=values.get("l", cfg.filter_length),
            strength=int(values.get("s", cfg.filter_strength)),
            side_gain=values.get("p", cfg.filter_side_gain),
        )
    except ValueError as exc:
        raise CliError(f"bad filter parameters: {exc}") from exc


def cmd_run(args) -> int:
    cfg = _load_config(args.config)
    world = load_world(_checked_path(args.world, "world"))
    trace = load_trace(_checked_path(args.trace, "trace")) if args.trace else []
    mode = ControlMode(args.mode)
    record = run(world, mode, trace, cfg)
    record.write(args.out)
    s = record.summary
    print(json.dumps(s.as_dict()))
    if args.report:
        from .report import render_run_report

        for path in render_run_report(record, world, args.report):
            print(f"wrote {path}")
    return EX_TIMEOUT if s.timed_out else EX_OK


def cmd_plan(args) -> int:
    cfg = _load_config(args.config)
    world = load_world(_checked_path(args.world, "world"))
    grid = GridSpec.from_bounds(world.bounds, cfg.resolution)
    mask = inflate_obstacles(world.obstacles, cfg.robot_radius + cfg.inflation_margin, grid) \
        if world.obstacles else np.zeros((grid.height, grid.width), dtype=bool)
    base = obstacle_cost_grid(mask, grid, cfg.decay_rate)
    sx, sy, stheta = world.start
    active = None
    if args.filter_spec:
        params = parse_filter_spec(args.filter_spec, cfg)
        seed = plan(PlanRequest((sx, sy), world.goal, base), cfg.cost_weight)
        direction = fit_path_direction(seed.points, sx, sy, stheta)
        active = (make_cost_frame(sx, sy, stheta, params.offset, direction), params)
    composed = compose_costmap(base, active)
    path = plan(PlanRequest((sx, sy), world.goal, composed), cfg.cost_weight)
    print(f"path: {len(path)} vertices, {path.arc_length:.2f} m, cost {path.cost:.3f}")
    if args.dump:
        dump_costmap(composed, args.dump)
        print(f"wrote {args.dump} and {args.dump}.json")
    if args.path_out:
        with open(args.path_out, "w") as fh:
            fh.write("x,y\n")
            for x, y in path.points:
                fh.write(f"{x},{y}\n")
        print(f"wrote {args.path_out}")
    if args.fig:
        from .report import render_costmap

        render_costmap(composed, args.fig, path)
        print(f"wrote {args.fig}")
    return EX_OK


def cmd_serve(args) -> int:
    cfg = _load_config(args.config)
    world = load_world(_checked_path(args.world, "world"))
    from .server import SessionConfig, serve

    conf = SessionConfig(mode=ControlMode(args.mode), sim=cfg, rate=args.rate,
                         realtime=not args.fast, autostart=args.autostart)
    print(f"serving {args.world} [{args.mode}] on ws://{args.host}:{args.port}/ws")
    serve(world, conf, host=args.host, port=args.port)
    return EX_OK


def cmd_report(args) -> int:
    record = RunRecord.read(_checked_path(args.record, "record"))
    world = load_world(_checked_path(args.world, "world"))
    from .report import render_run_report

    for path in render_run_report(record, world, args.out_dir):
        print(f"wrote {path}")
    return EX_OK


_COMMANDS = {"run": cmd_run, "plan": cmd_plan, "serve": cmd_serve, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"sharenav: {exc}", file=sys.stderr)
        return exc.code
    except FileNotFoundError as exc:
        print(f"sharenav: {exc}", file=sys.stderr)
        return EX_NOFILE
    except (ParseError, ValidationError, TraceError, ConfigError, NoPathError) as exc:
        print(f"sharenav: {exc}", file=sys.stderr)
        return EX_ERROR


if __name__ == "__main__":
    sys.exit(main())
