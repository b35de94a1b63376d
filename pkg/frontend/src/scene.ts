// Pure scene construction: ViewState in, drawing primitives (world
// coordinates) out. Keeping this free of canvas/DOM makes the geometry
// testable; render.ts only rasterizes.

import { ViewState } from "./view.js";

export type Primitive =
  | { kind: "rect"; x: number; y: number; w: number; h: number; stroke: string; width?: number }
  | { kind: "disc"; x: number; y: number; r: number; fill: string; alpha?: number }
  | { kind: "ring"; x: number; y: number; r: number; stroke: string; width?: number; alpha?: number }
  | { kind: "polygon"; points: [number, number][]; fill: string; alpha?: number }
  | { kind: "polyline"; points: [number, number][]; stroke: string; width?: number }
  | { kind: "marker"; x: number; y: number; r: number; fill: string; stroke: string }
  | { kind: "triangle"; points: [number, number][]; fill: string };

export const PATH_COLOR = "#e03131";       // the global path is drawn in red
export const MARKER_COLOR = "#ffffff";     // the offset marker is white
export const APRIORI_COLOR = "#5c636a";
export const SENSED_COLOR = "#e8890c";
export const UNSENSED_COLOR = "#adb5bd";
export const POOL_COLOR = "#74b816";

export function robotTriangle(x: number, y: number, theta: number, size = 0.35): [number, number][] {
  const c = Math.cos(theta);
  const s = Math.sin(theta);
  const local: [number, number][] = [
    [size, 0],
    [-0.6 * size, 0.55 * size],
    [-0.6 * size, -0.55 * size],
  ];
  return local.map(([px, py]) => [x + c * px - s * py, y + s * px + c * py]);
}

export function buildScene(view: ViewState): Primitive[] {
  const prims: Primitive[] = [];
  const world = view.world;
  const state = view.state;

  if (world) {
    const [xmin, ymin, xmax, ymax] = world.bounds;
    prims.push({ kind: "rect", x: xmin, y: ymin, w: xmax - xmin, h: ymax - ymin,
                 stroke: "#343a40", width: 2 });

    for (const pool of world.pools) {
      // the operator sees the glow; shade the fade halo by intensity
      prims.push({ kind: "disc", x: pool.center[0], y: pool.center[1],
                   r: pool.radius + pool.fade, fill: POOL_COLOR,
                   alpha: 0.12 + 0.13 * Math.min(1, pool.intensity) });
      prims.push({ kind: "disc", x: pool.center[0], y: pool.center[1],
                   r: pool.radius, fill: POOL_COLOR,
                   alpha: 0.5 + 0.3 * Math.min(1, pool.intensity) });
    }

    const sensed = new Set(state?.sensed ?? []);
    world.obstacles.forEach((obs, index) => {
      // robot knowledge: known a priori, discovered by the sensor, or still
      // invisible to the robot (the human can see it through the camera)
      const fill = obs.a_priori ? APRIORI_COLOR
        : sensed.has(index) ? SENSED_COLOR : UNSENSED_COLOR;
      const alpha = obs.a_priori || sensed.has(index) ? 1.0 : 0.45;
      if (obs.shape === "circle" && obs.center && obs.radius !== undefined) {
        prims.push({ kind: "disc", x: obs.center[0], y: obs.center[1],
                     r: Math.max(obs.radius, 0.12), fill, alpha });
      } else if (obs.points) {
        prims.push({ kind: "polygon", points: obs.points, fill, alpha });
      }
    });

    prims.push({ kind: "ring", x: world.goal[0], y: world.goal[1], r: 0.5,
                 stroke: "#e03131", width: 2 });
    prims.push({ kind: "disc", x: world.goal[0], y: world.goal[1], r: 0.12,
                 fill: "#e03131" });
  }

  if (state) {
    if (state.path.length > 1) {
      prims.push({ kind: "polyline", points: state.path, stroke: PATH_COLOR, width: 2 });
    }
    if (state.filter) {
      const [fx, fy] = state.filter.frame.origin;
      prims.push({ kind: "marker", x: fx, y: fy, r: 0.22, fill: MARKER_COLOR,
                   stroke: "#343a40" });
    }
    prims.push({ kind: "triangle",
                 points: robotTriangle(state.pose.x, state.pose.y, state.pose.theta),
                 fill: "#1c7ed6" });
  }
  return prims;
}

export type HudLine = { label: string; value: string };

export function buildHud(view: ViewState): HudLine[] {
  const lines: HudLine[] = [];
  const state = view.state;
  const mode = view.world?.mode ?? "-";
  lines.push({ label: "mode", value: mode === "sc" ? "shared control" : mode === "cs" ? "control switching" : mode });
  lines.push({ label: "t", value: state ? `${state.t.toFixed(1)} s` : "-" });
  lines.push({ label: "speed", value: state ? `${state.u.v.toFixed(2)} m/s` : "-" });
  lines.push({ label: "turn", value: state ? `${state.u.omega.toFixed(2)} rad/s` : "-" });
  lines.push({ label: "radiation", value: state ? state.radiation.toFixed(2) : "-" });
  lines.push({ label: "cumulative", value: state ? state.cum_radiation.toFixed(2) : "-" });
  if (state?.filter) {
    lines.push({ label: "filter d", value: `${state.filter.d.toFixed(2)} m` });
  }
  if (state?.done) {
    lines.push({ label: "run", value: state.timed_out ? "TIMEOUT" : "GOAL REACHED" });
  }
  if (view.role) {
    lines.push({ label: "role", value: view.role });
  }
  return lines;
}

// radiation meter fill fraction for the HUD bar (saturates at 2.0)
export function radiationFraction(radiation: number): number {
  return Math.max(0, Math.min(1, radiation / 2.0));
}
