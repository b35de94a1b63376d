// Wire protocol: one JSON object per WebSocket text frame, all carrying v: 1.

export type Pose = { x: number; y: number; theta: number };

export type ObstacleInfo = {
  name: string;
  shape: "circle" | "polygon";
  a_priori: boolean;
  center?: [number, number];
  radius?: number;
  points?: [number, number][];
};

export type PoolInfo = {
  name: string;
  center: [number, number];
  radius: number;
  intensity: number;
  fade: number;
};

export type FilterInfo = {
  d: number;
  w: number;
  l: number;
  s: number;
  p: number;
  frame: { origin: [number, number]; y_axis: [number, number] };
};

export type HelloMsg = { v: 1; type: "hello"; role: "driver" | "observer" };

export type WorldMsg = {
  v: 1;
  type: "world";
  mode: string;
  dt: number;
  latency: number;
  rate: number;
  bounds: [number, number, number, number];
  start: Pose;
  goal: [number, number];
  obstacles: ObstacleInfo[];
  pools: PoolInfo[];
};

export type StateMsg = {
  v: 1;
  type: "state";
  tick: number;
  t: number;
  pose: Pose;
  u: { v: number; omega: number };
  joystick: { jx: number; jy: number; trigger: boolean };
  path: [number, number][];
  filter: FilterInfo | null;
  sensed: number[];
  radiation: number;
  cum_radiation: number;
  done: boolean;
  timed_out: boolean;
};

export type CostmapMsg = {
  v: 1;
  type: "costmap";
  header: { origin: [number, number]; resolution: number; width: number; height: number };
  cells: number[];
};

export type MetricsMsg = { v: 1; type: "metrics"; summary: Record<string, unknown> };

export type ErrorMsg = { v: 1; type: "error"; message: string };

export type ServerMsg = HelloMsg | WorldMsg | StateMsg | CostmapMsg | MetricsMsg | ErrorMsg;

export type InputMsg = {
  v: 1;
  type: "input";
  t: number;
  jx: number;
  jy: number;
  trigger: boolean;
};

export type CommandMsg = { v: 1; type: "command"; name: string; mode?: string };

const KNOWN_TYPES = new Set(["hello", "world", "state", "costmap", "metrics", "error"]);

// Parse a server frame; returns null for anything malformed rather than throwing,
// so one bad frame cannot take the console down.
export function parseServerMessage(text: string): ServerMsg | null {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof doc !== "object" || doc === null) return null;
  const msg = doc as Record<string, unknown>;
  if (msg.v !== 1 || typeof msg.type !== "string" || !KNOWN_TYPES.has(msg.type)) return null;
  if (msg.type === "state") {
    const pose = msg.pose as Pose | undefined;
    if (
      typeof msg.tick !== "number" ||
      typeof msg.t !== "number" ||
      !pose ||
      typeof pose.x !== "number" ||
      typeof pose.y !== "number" ||
      typeof pose.theta !== "number" ||
      !Array.isArray(msg.path)
    ) {
      return null;
    }
  }
  if (msg.type === "world" && !Array.isArray(msg.bounds)) return null;
  if (msg.type === "costmap" && !Array.isArray(msg.cells)) return null;
  return msg as ServerMsg;
}

export function inputMessage(t: number, jx: number, jy: number, trigger: boolean): InputMsg {
  return { v: 1, type: "input", t, jx, jy, trigger };
}

export function commandMessage(name: string, mode?: string): CommandMsg {
  return mode === undefined ? { v: 1, type: "command", name } : { v: 1, type: "command", name, mode };
}
