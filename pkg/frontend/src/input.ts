// Operator input: gamepad preferred, keyboard fallback. Samples are clamped,
// deduplicated, and rate-limited before they reach the wire.

export type InputSample = { jx: number; jy: number; trigger: boolean };

export const NEUTRAL: InputSample = { jx: 0, jy: 0, trigger: false };

const DEADZONE = 0.06;

function clampAxis(v: number): number {
  if (!Number.isFinite(v)) return 0;
  const clamped = Math.max(-1, Math.min(1, v));
  return Math.abs(clamped) < DEADZONE ? 0 : clamped;
}

export type GamepadLike = {
  axes: ReadonlyArray<number>;
  buttons: ReadonlyArray<{ pressed: boolean }>;
};

// stick x -> jx, second axis is the speed lever (browser sticks report up as
// negative, the lever wants up positive), trigger = first shoulder/trigger
// button that is pressed
export function mapGamepad(pad: GamepadLike): InputSample {
  const jx = clampAxis(pad.axes[0] ?? 0);
  const jy = clampAxis(-(pad.axes[1] ?? 0));
  const trigger = [pad.buttons[7], pad.buttons[5], pad.buttons[0]]
    .some((b) => b?.pressed ?? false);
  return { jx, jy, trigger };
}

// Arrows steer and work the lever, space is the trigger.
export class KeyboardInput {
  private held = new Set<string>();

  keyDown(key: string): void {
    this.held.add(key);
  }

  keyUp(key: string): void {
    this.held.delete(key);
  }

  sample(): InputSample {
    const jx = (this.held.has("ArrowRight") ? 1 : 0) - (this.held.has("ArrowLeft") ? 1 : 0);
    const jy = (this.held.has("ArrowUp") ? 1 : 0) - (this.held.has("ArrowDown") ? 1 : 0);
    return { jx, jy, trigger: this.held.has(" ") || this.held.has("Space") };
  }
}

export function samplesEqual(a: InputSample, b: InputSample): boolean {
  return a.jx === b.jx && a.jy === b.jy && a.trigger === b.trigger;
}

// Emits at most maxHz samples per second and only when the sample changed;
// trigger edges bypass the rate window (a release places the cost filter,
// so it must never be swallowed), still one emission per edge.
export class InputEmitter {
  private last: InputSample = NEUTRAL;
  private lastEmitMs = -Infinity;
  private readonly intervalMs: number;

  constructor(private readonly send: (s: InputSample) => void, maxHz = 60) {
    this.intervalMs = 1000 / maxHz;
  }

  submit(sample: InputSample, nowMs: number): boolean {
    if (samplesEqual(sample, this.last)) return false;
    const edge = sample.trigger !== this.last.trigger;
    if (!edge && nowMs - this.lastEmitMs < this.intervalMs) return false;
    this.last = sample;
    this.lastEmitMs = nowMs;
    this.send(sample);
    return true;
  }
}
