/**
 * Keyboard input mapped to wire-protocol input messages.
 *
 * Arrow keys (or A/D) hold a velocity; space requests a single bank.
 * A message goes out immediately on every key change, plus a heartbeat
 * at the configured interval so the server always has a fresh vx.
 */

export interface InputOptions {
  /** Magnitude of the held velocity in m/s. */
  speed?: number;
  /** Heartbeat period in ms; must not exceed the server tick. */
  heartbeatMs?: number;
  send: (vx: number, bank: boolean) => void;
  setInterval?: (fn: () => void, ms: number) => unknown;
  clearInterval?: (handle: unknown) => void;
}

interface KeyEventLike {
  key: string;
  repeat?: boolean;
  preventDefault?: () => void;
}

const LEFT = new Set(["ArrowLeft", "a", "A"]);
const RIGHT = new Set(["ArrowRight", "d", "D"]);

export class InputHandler {
  private speed: number;
  private heartbeatMs: number;
  private send: (vx: number, bank: boolean) => void;
  private left = false;
  private right = false;
  private bankPending = false;
  private timer: unknown = null;
  private opts: InputOptions;

  constructor(opts: InputOptions) {
    this.opts = opts;
    this.speed = opts.speed ?? 2.0;
    this.heartbeatMs = opts.heartbeatMs ?? 50;
    this.send = opts.send;
  }

  get vx(): number {
    // both held cancels out
    return (this.right ? this.speed : 0) - (this.left ? this.speed : 0);
  }

  private flush() {
    this.send(this.vx, this.bankPending);
    this.bankPending = false;
  }

  keyDown(ev: KeyEventLike) {
    if (ev.repeat) return;
    if (LEFT.has(ev.key)) {
      this.left = true;
    } else if (RIGHT.has(ev.key)) {
      this.right = true;
    } else if (ev.key === " ") {
      this.bankPending = true;
    } else {
      return;
    }
    ev.preventDefault?.();
    this.flush();
  }

  keyUp(ev: KeyEventLike) {
    if (LEFT.has(ev.key)) {
      this.left = false;
    } else if (RIGHT.has(ev.key)) {
      this.right = false;
    } else {
      return;
    }
    this.flush();
  }

  start() {
    const set = this.opts.setInterval ?? ((fn, ms) => setInterval(fn, ms));
    this.timer = set(() => this.flush(), this.heartbeatMs);
  }

  stop() {
    if (this.timer !== null) {
      (this.opts.clearInterval ?? clearInterval)(this.timer as never);
      this.timer = null;
    }
  }

  attach(target: {
    addEventListener(type: string, fn: (ev: KeyEventLike) => void): void;
  }) {
    target.addEventListener("keydown", (ev) => this.keyDown(ev));
    target.addEventListener("keyup", (ev) => this.keyUp(ev));
    this.start();
  }
}
