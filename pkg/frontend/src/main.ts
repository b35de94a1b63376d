// Console wiring: live session by default, file-based record replay when the
// user loads a record (no server needed for replay).

import { SessionClient, sessionUrl } from "./client.js";
import { InputEmitter, KeyboardInput, NEUTRAL, mapGamepad } from "./input.js";
import { ReplayPlayer, parseRecord, worldDocToMsg } from "./replay.js";
import { renderFrame } from "./render.js";
import { ViewState } from "./view.js";

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const statusEl = document.getElementById("status") as HTMLElement;
const reconnectBtn = document.getElementById("reconnect") as HTMLButtonElement;
const startBtn = document.getElementById("start") as HTMLButtonElement;
const resetBtn = document.getElementById("reset") as HTMLButtonElement;
const costmapBtn = document.getElementById("costmap") as HTMLButtonElement;
const recordFile = document.getElementById("record-file") as HTMLInputElement;
const worldFile = document.getElementById("world-file") as HTMLInputElement;

const view = new ViewState();
const keyboard = new KeyboardInput();
let player: ReplayPlayer | null = null;
let gamepadSeen = false;

const client = new SessionClient(sessionUrl(new URLSearchParams(location.search), location), view, {
  onChange: updateStatus,
});
client.connect();

const emitter = new InputEmitter((sample) => client.sendInput(sample));

function resize(): void {
  canvas.width = window.innerWidth;
  canvas.height = window.innerHeight - 48;
  view.fitCamera(canvas.width, canvas.height);
}
window.addEventListener("resize", resize);
resize();

function updateStatus(): void {
  if (player) {
    statusEl.textContent = `replay (${player.finished ? "finished" : "playing"})`;
  } else if (view.connected) {
    statusEl.textContent = `connected as ${view.role ?? "?"}` +
      (gamepadSeen ? ", gamepad" : ", keyboard (arrows + space)");
  } else {
    statusEl.textContent = "disconnected";
  }
  reconnectBtn.style.display = view.connected || player ? "none" : "inline-block";
}

reconnectBtn.addEventListener("click", () => client.connect());
startBtn.addEventListener("click", () => client.command("start"));
resetBtn.addEventListener("click", () => client.command("reset"));
costmapBtn.addEventListener("click", () => {
  view.showCostmap = !view.showCostmap;
  if (view.showCostmap) client.requestCostmap();
});

window.addEventListener("keydown", (ev) => {
  if (ev.repeat) return;
  keyboard.keyDown(ev.key);
});
window.addEventListener("keyup", (ev) => keyboard.keyUp(ev.key));

recordFile.addEventListener("change", async () => {
  const file = recordFile.files?.[0];
  if (!file) return;
  const parsed = parseRecord(await file.text());
  client.close();
  view.state = null;
  view.summary = parsed.summary;
  player = new ReplayPlayer(parsed.frames,
                            typeof parsed.summary.dt === "number" ? (parsed.summary.dt as number) : 0.05);
  if (view.world) view.world = { ...view.world, mode: parsed.mode };
  updateStatus();
});

worldFile.addEventListener("change", async () => {
  const file = worldFile.files?.[0];
  if (!file) return;
  const doc = JSON.parse(await file.text());
  view.applyMessage(worldDocToMsg(doc, player ? "replay" : view.world?.mode ?? "-"));
  view.fitCamera(canvas.width, canvas.height);
});

// pan with drag, zoom with the wheel
let dragging = false;
let lastDrag: [number, number] = [0, 0];
canvas.addEventListener("mousedown", (ev) => {
  dragging = true;
  lastDrag = [ev.clientX, ev.clientY];
});
window.addEventListener("mouseup", () => (dragging = false));
window.addEventListener("mousemove", (ev) => {
  if (!dragging) return;
  view.pan(ev.clientX - lastDrag[0], ev.clientY - lastDrag[1]);
  lastDrag = [ev.clientX, ev.clientY];
});
canvas.addEventListener("wheel", (ev) => {
  ev.preventDefault();
  view.zoom(ev.deltaY < 0 ? 1.1 : 1 / 1.1);
});

let lastFrameMs = performance.now();
function frame(nowMs: number): void {
  const elapsed = nowMs - lastFrameMs;
  lastFrameMs = nowMs;

  if (player) {
    for (const state of player.advance(elapsed)) view.applyMessage(state);
  } else {
    const pads = navigator.getGamepads ? navigator.getGamepads() : [];
    const pad = pads && pads[0];
    gamepadSeen = !!pad;
    const sample = pad ? mapGamepad(pad) : keyboard.sample();
    emitter.submit(sample ?? NEUTRAL, nowMs);
  }

  renderFrame(canvas, view);
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
updateStatus();
