/**
 * Scripted headless client: plays one trial over the wire protocol.
 *
 * The policy is the simple trained-player script: sit in the heat
 * region banking, retreat past the hazard radius while the token is up,
 * return when it drops.  Every received frame is logged so the metrics
 * can score the trial afterwards.  Works against anything that speaks
 * the protocol: the real service or an in-process fake.
 */

import { minimumUsefulSignal, SignalReport, wastedSteps, WastedSteps } from "./metrics.js";
import { ServerMsg, StateMsg, TrialSummary } from "./protocol.js";
import { GameSocket, NetOptions } from "./net.js";
import { HAZARD_RADIUS, HEAT_RADIUS } from "./render.js";

export interface TrialResult {
  frames: StateMsg[];
  summary: TrialSummary;
  wasted: WastedSteps;
  signal: SignalReport;
}

export interface HeadlessOptions {
  trialId?: number;
  speed?: number;
  exitSpeed?: number;
  /** Safety margin beyond the hazard radius when sheltering. */
  shelterMargin?: number;
}

/** Velocity for one frame of the scripted policy. */
export function scriptedVx(frame: StateMsg, speed: number, margin: number): number {
  if (frame.token) {
    // out: move away from center until safely past the hazard radius
    return Math.abs(frame.pos) < HAZARD_RADIUS + margin ? speed : 0;
  }
  // in: glide back to the heat region and hold
  if (frame.pos > HEAT_RADIUS * 0.3) return -speed;
  if (frame.pos < -HEAT_RADIUS * 0.3) return speed;
  return 0;
}

/**
 * Run one full trial; resolves once trial_end arrives.  The socket
 * options are passed through so tests can supply a fake transport.
 */
export function runScriptedTrial(
  net: Omit<NetOptions, "onMessage">,
  opts: HeadlessOptions = {},
): Promise<TrialResult> {
  const trialId = opts.trialId ?? 0;
  const speed = opts.speed ?? 2.0;
  const exitSpeed = opts.exitSpeed ?? speed;
  const margin = opts.shelterMargin ?? 0.1;
  const frames: StateMsg[] = [];

  return new Promise((resolve, reject) => {
    const socket: GameSocket = new GameSocket({
      ...net,
      onMessage: (msg: ServerMsg) => {
        if (msg.type === "state") {
          frames.push(msg);
          const vx = scriptedVx(msg, speed, margin);
          // bank continuously; the server only converts at capacity
          socket.send({ type: "input", vx, bank: true });
        } else if (msg.type === "trial_end") {
          socket.close();
          resolve({
            frames,
            summary: msg.summary,
            wasted: wastedSteps(frames),
            signal: minimumUsefulSignal(frames, exitSpeed),
          });
        }
      },
      onStatus: (status) => {
        if (status === "open") {
          socket.send({ type: "start_trial", trial_id: trialId });
        } else if (status === "closed" && frames.length === 0) {
          reject(new Error("connection closed before any state arrived"));
        }
      },
    });
    socket.connect();
  });
}
