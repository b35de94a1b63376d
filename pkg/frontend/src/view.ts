// Latest-frame view model. Rendering reads from here and never mutates the
// received payloads; the simulation is the single source of truth.

import { CostmapMsg, ServerMsg, StateMsg, WorldMsg } from "./protocol.js";

export type Camera = { centerX: number; centerY: number; pixelsPerMeter: number };

export class ViewState {
  world: WorldMsg | null = null;
  state: StateMsg | null = null;
  costmap: CostmapMsg | null = null;
  summary: Record<string, unknown> | null = null;
  role: "driver" | "observer" | null = null;
  connected = false;
  lastError: string | null = null;
  showCostmap = false;
  camera: Camera = { centerX: 0, centerY: 0, pixelsPerMeter: 30 };

  applyMessage(msg: ServerMsg): void {
    switch (msg.type) {
      case "hello":
        this.role = msg.role;
        break;
      case "world":
        // a world frame marks a (re)start: drop run-scoped state
        this.world = msg;
        this.state = null;
        this.costmap = null;
        this.summary = null;
        this.fitCamera();
        break;
      case "state":
        // frames can arrive out of order after reconnects; older ticks lose
        if (this.state === null || msg.tick >= this.state.tick) {
          this.state = msg;
        }
        break;
      case "costmap":
        this.costmap = msg;
        break;
      case "metrics":
        this.summary = msg.summary;
        break;
      case "error":
        this.lastError = msg.message;
        break;
    }
  }

  fitCamera(viewportW = 1200, viewportH = 800): void {
    if (!this.world) return;
    const [xmin, ymin, xmax, ymax] = this.world.bounds;
    this.camera.centerX = (xmin + xmax) / 2;
    this.camera.centerY = (ymin + ymax) / 2;
    const margin = 1.05;
    this.camera.pixelsPerMeter = Math.min(
      viewportW / ((xmax - xmin) * margin),
      viewportH / ((ymax - ymin) * margin),
    );
  }

  pan(dxPx: number, dyPx: number): void {
    this.camera.centerX -= dxPx / this.camera.pixelsPerMeter;
    this.camera.centerY += dyPx / this.camera.pixelsPerMeter;
  }

  zoom(factor: number): void {
    const next = this.camera.pixelsPerMeter * factor;
    this.camera.pixelsPerMeter = Math.min(400, Math.max(2, next));
  }
}
