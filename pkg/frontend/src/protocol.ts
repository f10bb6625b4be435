/**
 * Wire protocol for the hazard-corridor live service.
 *
 * The server owns all simulation state; the client only sends inputs
 * and trial-start requests and renders what comes back.
 */

export interface StateMsg {
  type: "state";
  t: number;
  pos: number;
  hazard: boolean;
  heat: number;
  token: number;
  score: number;
  remaining: number;
}

export interface TrialSummary {
  trial_id: number;
  coagent: string;
  score: number;
  ticks: number;
  wasted_steps: number;
}

export interface TrialEndMsg {
  type: "trial_end";
  summary: TrialSummary;
}

export interface NoticeMsg {
  type: "notice";
  message: string;
}

export type ServerMsg = StateMsg | TrialEndMsg | NoticeMsg;

export type ClientMsg =
  | { type: "input"; vx: number; bank: boolean }
  | { type: "start_trial"; trial_id: number };

function isNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

/** Parse and validate one server frame; null for anything malformed. */
export function parseServerMsg(raw: string): ServerMsg | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const msg = data as Record<string, unknown>;
  switch (msg.type) {
    case "state":
      if (
        isNumber(msg.t) &&
        isNumber(msg.pos) &&
        typeof msg.hazard === "boolean" &&
        isNumber(msg.heat) &&
        isNumber(msg.token) &&
        isNumber(msg.score) &&
        isNumber(msg.remaining)
      ) {
        return msg as unknown as StateMsg;
      }
      return null;
    case "trial_end": {
      const s = msg.summary as Record<string, unknown> | undefined;
      if (
        s &&
        isNumber(s.trial_id) &&
        typeof s.coagent === "string" &&
        isNumber(s.score) &&
        isNumber(s.ticks) &&
        isNumber(s.wasted_steps)
      ) {
        return msg as unknown as TrialEndMsg;
      }
      return null;
    }
    case "notice":
      return typeof msg.message === "string" ? (msg as unknown as NoticeMsg) : null;
    default:
      return null;
  }
}

export function encodeClientMsg(msg: ClientMsg): string {
  return JSON.stringify(msg);
}
