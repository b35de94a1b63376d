// Log replay: turn a run-record JSON-lines file into the same state frames a
// live session would have broadcast, so the renderer needs no server.

import { FilterInfo, StateMsg, WorldMsg } from "./protocol.js";

type RecordRow = {
  type: "tick";
  t: number;
  x: number;
  y: number;
  theta: number;
  v: number;
  omega: number;
  jx: number;
  jy: number;
  trigger: boolean;
  mode: string;
  filter: { d: number; w: number; l: number; s: number; p: number } | null;
  radiation: number;
  pool_distance: number | null;
  clearance: number | null;
};

export type ParsedRecord = {
  frames: StateMsg[];
  summary: Record<string, unknown>;
  mode: string;
};

function sameParams(a: RecordRow["filter"], b: RecordRow["filter"]): boolean {
  if (a === null || b === null) return a === b;
  return a.d === b.d && a.w === b.w && a.l === b.l && a.s === b.s && a.p === b.p;
}

// The record stores filter parameters but not the frame; the origin is
// reconstructed from the placement row exactly the way the planner placed it:
// offset d along the robot's right axis.
function rebuildFilter(row: RecordRow, placement: RecordRow): FilterInfo | null {
  if (row.filter === null) return null;
  const rx = Math.sin(placement.theta);
  const ry = -Math.cos(placement.theta);
  return {
    ...row.filter,
    frame: {
      origin: [placement.x + row.filter.d * rx, placement.y + row.filter.d * ry],
      y_axis: [Math.cos(placement.theta), Math.sin(placement.theta)],
    },
  };
}

export function parseRecord(text: string): ParsedRecord {
  const rows: RecordRow[] = [];
  let summary: Record<string, unknown> | null = null;
  for (const line of text.split("\n")) {
    if (!line.trim()) continue;
    const doc = JSON.parse(line);
    if (doc.type === "summary") summary = doc;
    else if (doc.type === "tick") rows.push(doc as RecordRow);
  }
  if (summary === null) throw new Error("record has no summary line");
  const dt = typeof summary.dt === "number" ? summary.dt : 0.05;

  const frames: StateMsg[] = [];
  let cum = 0;
  let placement: RecordRow | null = null;
  rows.forEach((row, i) => {
    const prev = i > 0 ? rows[i - 1] : null;
    if (row.filter !== null && (prev === null || !sameParams(prev.filter, row.filter))) {
      placement = row;
    }
    if (row.filter === null) placement = null;
    frames.push({
      v: 1,
      type: "state",
      tick: i,
      t: row.t,
      pose: { x: row.x, y: row.y, theta: row.theta },
      u: { v: row.v, omega: row.omega },
      joystick: { jx: row.jx, jy: row.jy, trigger: row.trigger },
      path: [],
      filter: placement ? rebuildFilter(row, placement) : null,
      sensed: [],
      radiation: row.radiation,
      cum_radiation: cum,
      done: i === rows.length - 1,
      timed_out: i === rows.length - 1 && summary!.timed_out === true,
    });
    if (i < rows.length - 1) cum += row.radiation * dt;   // left Riemann sum
  });
  return { frames, summary, mode: String(summary.mode ?? rows[0]?.mode ?? "-") };
}

// A world document (the *.world JSON file) rendered locally next to a replay.
export function worldDocToMsg(doc: Record<string, unknown>, mode: string): WorldMsg {
  const start = doc.start as { x: number; y: number; theta: number };
  return {
    v: 1,
    type: "world",
    mode,
    dt: 0.05,
    latency: 0,
    rate: 0,
    bounds: doc.bounds as [number, number, number, number],
    start,
    goal: doc.goal as [number, number],
    obstacles: (doc.obstacles as WorldMsg["obstacles"]) ?? [],
    pools: (doc.pools as WorldMsg["pools"]) ?? [],
  };
}

export class ReplayPlayer {
  private index = 0;
  private carryMs = 0;

  constructor(readonly frames: StateMsg[], readonly dt: number, public speed = 1.0) {}

  get finished(): boolean {
    return this.index >= this.frames.length;
  }

  get current(): StateMsg | null {
    return this.index > 0 ? this.frames[this.index - 1] : null;
  }

  // Advance by wall-clock milliseconds; returns the frames that became due.
  advance(elapsedMs: number): StateMsg[] {
    this.carryMs += elapsedMs * this.speed;
    const due: StateMsg[] = [];
    const frameMs = this.dt * 1000;
    while (this.carryMs >= frameMs && !this.finished) {
      due.push(this.frames[this.index]);
      this.index += 1;
      this.carryMs -= frameMs;
    }
    return due;
  }

  restart(): void {
    this.index = 0;
    this.carryMs = 0;
  }
}
