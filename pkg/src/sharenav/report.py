"""Render run records and costmaps to figures with delimited data alongside."""
from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import Circle, Polygon as MplPolygon, Rectangle

from .costmap import Costmap
from .planner import GlobalPath
from .scenario import RunRecord
from .world import WorldModel


def _draw_world(ax, world: WorldModel) -> None:
    xmin, ymin, xmax, ymax = world.bounds
    ax.add_patch(Rectangle((xmin, ymin), xmax - xmin, ymax - ymin,
                           fill=False, edgecolor="black", linewidth=1.2))
    for pool in world.pools:
        ax.add_patch(Circle(pool.center, pool.radius + pool.fade,
                            color="yellowgreen", alpha=0.25, linewidth=0))
        ax.add_patch(Circle(pool.center, pool.radius, color="yellowgreen",
                            alpha=0.8, linewidth=0))
    for obs in world.obstacles:
        color = "dimgray" if obs.a_priori else "darkorange"
        if obs.shape == "circle":
            ax.add_patch(Circle(obs.center, obs.radius, color=color))
        else:
            ax.add_patch(MplPolygon(np.asarray(obs.points), closed=True, color=color))
    ax.plot(*world.start[:2], marker="o", color="tab:blue", markersize=7)
    ax.plot(*world.goal, marker="*", color="tab:red", markersize=12)
    ax.set_xlim(xmin - 0.5, xmax + 0.5)
    ax.set_ylim(ymin - 0.5, ymax + 0.5)
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")


def render_trajectory(record: RunRecord, world: WorldModel, out_png: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(9, 6))
    _draw_world(ax, world)
    xs = np.array([r.x for r in record.rows])
    ys = np.array([r.y for r in record.rows])
    rad = np.array([r.radiation for r in record.rows])
    sc = ax.scatter(xs, ys, c=rad, s=4, cmap="viridis")
    fig.colorbar(sc, ax=ax, label="radiation intensity")
    ax.set_title(f"{record.summary.mode} run: "
                 f"{record.summary.completion_time:.1f} s, "
                 f"radiation {record.summary.cumulative_radiation:.2f}")
    fig.tight_layout()
    out = Path(out_png)
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return out


def render_timeseries(record: RunRecord, out_png: str | Path) -> Path:
    rows = record.rows
    t = np.array([r.t for r in rows])
    fig, axes = plt.subplots(3, 1, figsize=(9, 7), sharex=True)
    axes[0].plot(t, [r.v for r in rows], label="v [m/s]")
    axes[0].plot(t, [r.omega for r in rows], label="omega [rad/s]")
    axes[0].legend(loc="upper right")
    axes[0].set_ylabel("command")
    axes[1].plot(t, [r.radiation for r in rows], color="tab:green", label="radiation")
    cum = np.concatenate(([0.0], np.cumsum([r.radiation for r in rows[:-1]]) * record.summary.dt))
    axes[1].plot(t, cum, color="tab:olive", label="cumulative")
    axes[1].legend(loc="upper left")
    axes[1].set_ylabel("radiation")
    clear = [r.clearance if r.clearance is not None else np.nan for r in rows]
    axes[2].plot(t, clear, color="tab:red")
    axes[2].axhline(0.0, color="black", linewidth=0.8, linestyle="--")
    axes[2].set_ylabel("clearance [m]")
    axes[2].set_xlabel("t [s]")
    fig.tight_layout()
    out = Path(out_png)
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return out


def render_costmap(cm: Costmap, out_png: str | Path, path: GlobalPath | None = None) -> Path:
    spec = cm.spec
    half = spec.resolution / 2
    extent = (spec.origin_x - half, spec.origin_x + spec.width * spec.resolution - half,
              spec.origin_y - half, spec.origin_y + spec.height * spec.resolution - half)
    fig, ax = plt.subplots(figsize=(8, 7))
    im = ax.imshow(cm.cells, origin="lower", extent=extent, cmap="magma", vmin=0, vmax=255)
    fig.colorbar(im, ax=ax, label="cell cost")
    if path is not None and len(path) > 0:
        ax.plot(path.points[:, 0], path.points[:, 1], color="red", linewidth=1.5)
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    fig.tight_layout()
    out = Path(out_png)
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return out


def write_summary_csv(record: RunRecord, out_csv: str | Path) -> Path:
    out = Path(out_csv)
    doc = record.summary.as_dict()
    doc.pop("type")
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(doc.keys())
        writer.writerow(doc.values())
    return out


def write_rows_csv(record: RunRecord, out_csv: str | Path) -> Path:
    out = Path(out_csv)
    header = ["t", "x", "y", "theta", "v", "omega", "jx", "jy", "trigger",
              "mode", "filter_d", "radiation", "pool_distance", "clearance"]
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for r in record.rows:
            writer.writerow([
                r.t, r.x, r.y, r.theta, r.v, r.omega, r.jx, r.jy, r.trigger,
                r.mode, r.filter.offset if r.filter else "",
                r.radiation,
                "" if r.pool_distance is None else r.pool_distance,
                "" if r.clearance is None else r.clearance,
            ])
    return out


def render_run_report(record: RunRecord, world: WorldModel, out_dir: str | Path) -> list[Path]:
    """Figures plus CSVs for one run; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return [
        render_trajectory(record, world, out / "trajectory.png"),
        render_timeseries(record, out / "timeseries.png"),
        write_summary_csv(record, out / "summary.csv"),
        write_rows_csv(record, out / "rows.csv"),
    ]
