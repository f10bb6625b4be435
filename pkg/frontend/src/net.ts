/**
 * Websocket client with automatic reconnect.
 *
 * The socket constructor and timer are injectable so tests can drive
 * the client with a scripted fake server and virtual time.
 */

import { ClientMsg, encodeClientMsg, parseServerMsg, ServerMsg } from "./protocol.js";

/** The small slice of the WebSocket API the client actually uses. */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
}

export interface NetOptions {
  url: string;
  makeSocket?: (url: string) => SocketLike;
  setTimer?: (fn: () => void, ms: number) => unknown;
  baseBackoffMs?: number;
  maxBackoffMs?: number;
  onMessage: (msg: ServerMsg) => void;
  onStatus?: (status: "connecting" | "open" | "closed") => void;
}

export class GameSocket {
  private opts: Required<Pick<NetOptions, "makeSocket" | "setTimer" | "baseBackoffMs" | "maxBackoffMs">> &
    NetOptions;
  private socket: SocketLike | null = null;
  private attempts = 0;
  private stopped = false;

  constructor(opts: NetOptions) {
    this.opts = {
      makeSocket: (url: string) => new WebSocket(url) as unknown as SocketLike,
      setTimer: (fn, ms) => setTimeout(fn, ms),
      baseBackoffMs: 250,
      maxBackoffMs: 8000,
      ...opts,
    };
  }

  connect() {
    this.stopped = false;
    this.opts.onStatus?.("connecting");
    const sock = this.opts.makeSocket(this.opts.url);
    this.socket = sock;
    sock.onopen = () => {
      this.attempts = 0;
      this.opts.onStatus?.("open");
    };
    sock.onmessage = (ev) => {
      const msg = parseServerMsg(ev.data);
      if (msg) this.opts.onMessage(msg);
    };
    sock.onclose = () => {
      this.socket = null;
      this.opts.onStatus?.("closed");
      if (!this.stopped) this.scheduleReconnect();
    };
  }

  /** Exponential backoff: base * 2^attempts, capped. */
  backoffMs(): number {
    const ms = this.opts.baseBackoffMs * 2 ** this.attempts;
    return Math.min(ms, this.opts.maxBackoffMs);
  }

  private scheduleReconnect() {
    const delay = this.backoffMs();
    this.attempts += 1;
    this.opts.setTimer(() => {
      if (!this.stopped) this.connect();
    }, delay);
  }

  send(msg: ClientMsg): boolean {
    if (!this.socket) return false;
    try {
      this.socket.send(encodeClientMsg(msg));
      return true;
    } catch {
      return false;
    }
  }

  close() {
    this.stopped = true;
    this.socket?.close();
    this.socket = null;
  }
}
