/**
 * Browser entry point: wires socket, store, input, and renderer.
 *
 * Enter starts the next trial; arrows/A/D move; space banks.  An
 * optional audio tick accompanies the token cue turning on.
 */

import { GameSocket } from "./net.js";
import { Store } from "./state.js";
import { InputHandler } from "./input.js";
import { Renderer } from "./render.js";

const WIDTH = 900;
const HEIGHT = 420;

function tokenTick(): () => void {
  // lazily created so the AudioContext starts from a user gesture
  let ctx: AudioContext | null = null;
  return () => {
    try {
      ctx = ctx ?? new AudioContext();
      const osc = ctx.createOscillator();
      const gain = ctx.createGain();
      osc.frequency.value = 880;
      gain.gain.value = 0.05;
      osc.connect(gain).connect(ctx.destination);
      osc.start();
      osc.stop(ctx.currentTime + 0.07);
    } catch {
      // audio is optional; ignore unavailable contexts
    }
  };
}

export function start() {
  const canvas = document.getElementById("game") as HTMLCanvasElement;
  canvas.width = WIDTH;
  canvas.height = HEIGHT;
  const renderer = new Renderer(canvas.getContext("2d")!, {
    width: WIDTH,
    height: HEIGHT,
  });

  const store = new Store();
  const tick = tokenTick();
  let prevToken = 0;
  let nextTrial = 0;

  const socket = new GameSocket({
    url: `ws://${location.host}/ws`,
    onMessage: (msg) => {
      store.apply(msg);
      if (msg.type === "state") {
        if (msg.token && !prevToken) tick();
        prevToken = msg.token;
      } else if (msg.type === "trial_end") {
        nextTrial += 1;
      }
    },
    onStatus: (status) => store.setConnection(status),
  });
  socket.connect();

  const input = new InputHandler({
    send: (vx, bank) => {
      if (store.state.trialRunning) {
        socket.send({ type: "input", vx, bank });
      }
    },
  });
  input.attach(window);

  window.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter" && !store.state.trialRunning) {
      socket.send({ type: "start_trial", trial_id: nextTrial });
      store.trialStarted();
    }
  });

  const frame = () => {
    renderer.draw(store.state);
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);
}

if (typeof document !== "undefined" && document.getElementById("game")) {
  start();
}
