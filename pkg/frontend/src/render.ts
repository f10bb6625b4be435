/**
 * Canvas renderer for the 1-D hazard corridor.
 *
 * Draws the corridor with its concentric zones, the avatar at the last
 * broadcast position, a heat gauge, score, trial countdown, a prominent
 * token cue, and a full-corridor overlay while the hazard is active.
 * Pure draw-from-state: no animation state of its own.
 */

import { ClientState } from "./state.js";

/** Geometry constants mirroring the server corridor. */
export const CORRIDOR_HALF_WIDTH = 1.5;
export const HEAT_RADIUS = 0.165;
export const HAZARD_RADIUS = 1.0;
export const HEAT_CAPACITY = 5.0;

/** Subset of CanvasRenderingContext2D used here; stubbed in tests. */
export interface Ctx2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  font: string;
  textAlign: string;
  globalAlpha: number;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
}

export interface RendererOptions {
  width: number;
  height: number;
}

const COLORS = {
  background: "#10141a",
  safe: "#1d2633",
  hazardZone: "#332318",
  heatZone: "#4a2e1a",
  avatar: "#e8e3d3",
  hazardOverlay: "rgba(200, 60, 40, 0.45)",
  tokenOn: "#ffd23f",
  tokenOff: "#2c3442",
  gauge: "#d95d39",
  text: "#c9d1d9",
};

export function positionToX(pos: number, width: number): number {
  const clamped = Math.max(-CORRIDOR_HALF_WIDTH, Math.min(CORRIDOR_HALF_WIDTH, pos));
  return ((clamped + CORRIDOR_HALF_WIDTH) / (2 * CORRIDOR_HALF_WIDTH)) * width;
}

export function heatFraction(heat: number): number {
  return Math.max(0, Math.min(1, heat / HEAT_CAPACITY));
}

export class Renderer {
  constructor(
    private ctx: Ctx2D,
    private opts: RendererOptions,
  ) {}

  draw(state: ClientState) {
    const { width, height } = this.opts;
    const ctx = this.ctx;
    const corridorY = height * 0.35;
    const corridorH = height * 0.3;

    ctx.globalAlpha = 1;
    ctx.fillStyle = COLORS.background;
    ctx.fillRect(0, 0, width, height);

    // corridor zones, outermost first
    ctx.fillStyle = COLORS.safe;
    ctx.fillRect(0, corridorY, width, corridorH);
    const hazardX = positionToX(-HAZARD_RADIUS, width);
    ctx.fillStyle = COLORS.hazardZone;
    ctx.fillRect(hazardX, corridorY, width - 2 * hazardX, corridorH);
    const heatX = positionToX(-HEAT_RADIUS, width);
    ctx.fillStyle = COLORS.heatZone;
    ctx.fillRect(heatX, corridorY, width - 2 * heatX, corridorH);

    const last = state.last;
    if (last === null) {
      ctx.fillStyle = COLORS.text;
      ctx.font = "16px monospace";
      ctx.textAlign = "center";
      const label =
        state.connection === "open"
          ? "press Enter to start a trial"
          : `connection ${state.connection}...`;
      ctx.fillText(label, width / 2, height / 2);
      return;
    }

    if (last.hazard) {
      ctx.fillStyle = COLORS.hazardOverlay;
      ctx.fillRect(hazardX, corridorY, width - 2 * hazardX, corridorH);
    }

    // avatar at the broadcast position
    ctx.fillStyle = COLORS.avatar;
    ctx.beginPath();
    ctx.arc(positionToX(last.pos, width), corridorY + corridorH / 2, 10, 0, Math.PI * 2);
    ctx.fill();

    // token cue: large lamp above the corridor
    ctx.fillStyle = last.token ? COLORS.tokenOn : COLORS.tokenOff;
    ctx.beginPath();
    ctx.arc(width / 2, corridorY - 40, 18, 0, Math.PI * 2);
    ctx.fill();

    // heat gauge as a fraction of capacity
    const gaugeW = width * 0.25;
    const gaugeX = width * 0.05;
    const gaugeY = height * 0.85;
    ctx.strokeStyle = COLORS.text;
    ctx.strokeRect(gaugeX, gaugeY, gaugeW, 14);
    ctx.fillStyle = COLORS.gauge;
    ctx.fillRect(gaugeX, gaugeY, gaugeW * heatFraction(last.heat), 14);

    ctx.fillStyle = COLORS.text;
    ctx.font = "14px monospace";
    ctx.textAlign = "left";
    ctx.fillText(`heat ${Math.round(heatFraction(last.heat) * 100)}%`, gaugeX, gaugeY - 6);
    ctx.fillText(`score ${last.score}`, gaugeX, height * 0.08);
    ctx.textAlign = "right";
    ctx.fillText(`${last.remaining.toFixed(1)}s left`, width - gaugeX, height * 0.08);

    if (state.notices.length > 0) {
      ctx.textAlign = "center";
      ctx.fillText(state.notices[state.notices.length - 1], width / 2, height * 0.95);
    }
  }
}
