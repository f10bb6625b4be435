/**
 * Behavioral metrics computed from the received state stream.
 *
 * Mirrors the server-side trial-log metrics so a headless client can
 * score a trial from nothing but the wire protocol: wasted steps count
 * over-caution, and the minimum-useful-signal check asks whether each
 * hazard onset was preceded by a token rise early enough to escape.
 */

import { StateMsg } from "./protocol.js";
import { HAZARD_RADIUS, HEAT_RADIUS } from "./render.js";

export interface WastedSteps {
  total: number;
  perGap: number[];
}

/** Frames outside the heat region while no hazard is active, per gap. */
export function wastedSteps(frames: StateMsg[]): WastedSteps {
  const perGap = [0];
  let total = 0;
  let prevHazard = false;
  for (const f of frames) {
    if (prevHazard && !f.hazard) perGap.push(0);
    prevHazard = f.hazard;
    if (!f.hazard && Math.abs(f.pos) > HEAT_RADIUS) {
      total += 1;
      perGap[perGap.length - 1] += 1;
    }
  }
  return { total, perGap };
}

export function requiredLeadSeconds(exitSpeed: number): number {
  if (exitSpeed <= 0) throw new Error(`exit speed must be positive: ${exitSpeed}`);
  return (HAZARD_RADIUS - HEAT_RADIUS) / exitSpeed;
}

export interface PulseLead {
  onsetT: number;
  lead: number | null;
  useful: boolean;
}

export interface SignalReport {
  requiredLead: number;
  pulses: PulseLead[];
  fractionUseful: number;
}

/**
 * Lead time of the last token rise before each hazard onset; rises do
 * not carry across gaps.
 */
export function minimumUsefulSignal(frames: StateMsg[], exitSpeed: number): SignalReport {
  const required = requiredLeadSeconds(exitSpeed);
  const pulses: PulseLead[] = [];
  let lastRise: number | null = null;
  let prevToken = 0;
  let prevHazard = false;
  for (const f of frames) {
    if (f.token && !prevToken) lastRise = f.t;
    if (f.hazard && !prevHazard) {
      const lead = lastRise === null ? null : f.t - lastRise;
      pulses.push({ onsetT: f.t, lead, useful: lead !== null && lead >= required });
    }
    if (prevHazard && !f.hazard) lastRise = null;
    prevToken = f.token;
    prevHazard = f.hazard;
  }
  const useful = pulses.filter((p) => p.useful).length;
  return {
    requiredLead: required,
    pulses,
    fractionUseful: pulses.length ? useful / pulses.length : 0,
  };
}
