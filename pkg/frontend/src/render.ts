// Canvas rasterizer: world-space primitives plus the HUD. All geometry comes
// from scene.ts; this file only projects and strokes.

import { buildHud, buildScene, radiationFraction } from "./scene.js";
import { Camera, ViewState } from "./view.js";

function project(cam: Camera, w: number, h: number, x: number, y: number): [number, number] {
  return [
    w / 2 + (x - cam.centerX) * cam.pixelsPerMeter,
    h / 2 - (y - cam.centerY) * cam.pixelsPerMeter,
  ];
}

function costmapLayer(view: ViewState): HTMLCanvasElement | null {
  const cm = view.costmap;
  if (!cm || !view.showCostmap) return null;
  const layer = document.createElement("canvas");
  layer.width = cm.header.width;
  layer.height = cm.header.height;
  const lctx = layer.getContext("2d");
  if (!lctx) return null;
  const image = lctx.createImageData(cm.header.width, cm.header.height);
  for (let i = 0; i < cm.cells.length; i++) {
    const cost = cm.cells[i];
    image.data[4 * i] = 40 + 0.6 * cost;
    image.data[4 * i + 1] = 30;
    image.data[4 * i + 2] = 90 - 0.3 * cost;
    image.data[4 * i + 3] = cost === 0 ? 0 : 90 + 0.45 * cost;
  }
  lctx.putImageData(image, 0, 0);
  return layer;
}

export function renderFrame(canvas: HTMLCanvasElement, view: ViewState): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width: w, height: h } = canvas;
  const cam = view.camera;
  ctx.fillStyle = "#f1f3f5";
  ctx.fillRect(0, 0, w, h);

  const overlay = costmapLayer(view);
  if (overlay && view.costmap) {
    const hd = view.costmap.header;
    const half = hd.resolution / 2;
    const [sx, sy] = project(cam, w, h, hd.origin[0] - half,
                             hd.origin[1] + hd.height * hd.resolution - half);
    ctx.save();
    ctx.imageSmoothingEnabled = false;
    ctx.translate(sx, sy);
    const scale = hd.resolution * cam.pixelsPerMeter;
    ctx.scale(scale, scale);
    ctx.translate(0, hd.height);
    ctx.scale(1, -1);
    ctx.drawImage(overlay, 0, 0);
    ctx.restore();
  }

  for (const prim of buildScene(view)) {
    ctx.globalAlpha = "alpha" in prim && prim.alpha !== undefined ? prim.alpha : 1.0;
    switch (prim.kind) {
      case "rect": {
        const [x0, y0] = project(cam, w, h, prim.x, prim.y + prim.h);
        ctx.strokeStyle = prim.stroke;
        ctx.lineWidth = prim.width ?? 1;
        ctx.strokeRect(x0, y0, prim.w * cam.pixelsPerMeter, prim.h * cam.pixelsPerMeter);
        break;
      }
      case "disc": {
        const [x, y] = project(cam, w, h, prim.x, prim.y);
        ctx.fillStyle = prim.fill;
        ctx.beginPath();
        ctx.arc(x, y, prim.r * cam.pixelsPerMeter, 0, 2 * Math.PI);
        ctx.fill();
        break;
      }
      case "ring": {
        const [x, y] = project(cam, w, h, prim.x, prim.y);
        ctx.strokeStyle = prim.stroke;
        ctx.lineWidth = prim.width ?? 1;
        ctx.beginPath();
        ctx.arc(x, y, prim.r * cam.pixelsPerMeter, 0, 2 * Math.PI);
        ctx.stroke();
        break;
      }
      case "polygon":
      case "triangle": {
        ctx.fillStyle = prim.fill;
        ctx.beginPath();
        prim.points.forEach(([px, py], i) => {
          const [x, y] = project(cam, w, h, px, py);
          i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
        });
        ctx.closePath();
        ctx.fill();
        break;
      }
      case "polyline": {
        ctx.strokeStyle = prim.stroke;
        ctx.lineWidth = prim.width ?? 1;
        ctx.beginPath();
        prim.points.forEach(([px, py], i) => {
          const [x, y] = project(cam, w, h, px, py);
          i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
        });
        ctx.stroke();
        break;
      }
      case "marker": {
        const [x, y] = project(cam, w, h, prim.x, prim.y);
        ctx.fillStyle = prim.fill;
        ctx.strokeStyle = prim.stroke;
        ctx.lineWidth = 2;
        ctx.beginPath();
        ctx.arc(x, y, prim.r * cam.pixelsPerMeter, 0, 2 * Math.PI);
        ctx.fill();
        ctx.stroke();
        break;
      }
    }
  }
  ctx.globalAlpha = 1.0;

  drawHud(ctx, view, w);

  if (!view.connected && view.world) {
    ctx.fillStyle = "rgba(33, 37, 41, 0.45)";
    ctx.fillRect(0, 0, w, h);
    ctx.fillStyle = "#fff";
    ctx.font = "24px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.fillText("disconnected", w / 2, h / 2 - 30);
    ctx.textAlign = "left";
  }
}

function drawHud(ctx: CanvasRenderingContext2D, view: ViewState, w: number): void {
  const lines = buildHud(view);
  const pad = 10;
  const boxW = 240;
  ctx.fillStyle = "rgba(255, 255, 255, 0.85)";
  ctx.fillRect(pad, pad, boxW, 24 * lines.length + 38);
  ctx.fillStyle = "#212529";
  ctx.font = "14px system-ui, sans-serif";
  lines.forEach((line, i) => {
    ctx.fillText(`${line.label}: ${line.value}`, pad + 10, pad + 24 + i * 24);
  });
  // radiation meter bar under the text
  const meterY = pad + 24 * lines.length + 14;
  const frac = radiationFraction(view.state?.radiation ?? 0);
  ctx.strokeStyle = "#495057";
  ctx.strokeRect(pad + 10, meterY, boxW - 20, 12);
  ctx.fillStyle = frac > 0.5 ? "#e03131" : "#74b816";
  ctx.fillRect(pad + 10, meterY, (boxW - 20) * frac, 12);
}
