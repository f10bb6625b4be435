import { describe, expect, it } from "vitest";

import { Store } from "../src/state.js";
import { StateMsg } from "../src/protocol.js";

function frame(overrides: Partial<StateMsg> = {}): StateMsg {
  return {
    type: "state",
    t: 0.05,
    pos: 0,
    hazard: false,
    heat: 0,
    token: 0,
    score: 0,
    remaining: 300,
    ...overrides,
  };
}

describe("Store", () => {
  it("tracks the last broadcast only", () => {
    const store = new Store();
    store.apply(frame({ pos: 0.5 }));
    store.apply(frame({ pos: 0.7 }));
    expect(store.state.last?.pos).toBe(0.7);
    expect(store.state.trialRunning).toBe(true);
  });

  it("ends the trial and keeps the summary", () => {
    const store = new Store();
    store.apply(frame());
    store.apply({
      type: "trial_end",
      summary: { trial_id: 0, coagent: "bc", score: 5, ticks: 6000, wasted_steps: 80 },
    });
    expect(store.state.trialRunning).toBe(false);
    expect(store.state.summaries).toHaveLength(1);
    expect(store.state.summaries[0].score).toBe(5);
  });

  it("bounds the notice backlog", () => {
    const store = new Store();
    for (let i = 0; i < 10; i++) {
      store.apply({ type: "notice", message: `n${i}` });
    }
    expect(store.state.notices).toHaveLength(5);
    expect(store.state.notices.at(-1)).toBe("n9");
  });

  it("drops trialRunning when the connection drops", () => {
    const store = new Store();
    store.apply(frame());
    store.setConnection("closed");
    expect(store.state.trialRunning).toBe(false);
  });

  it("notifies subscribers and honors unsubscribe", () => {
    const store = new Store();
    let calls = 0;
    const off = store.subscribe(() => calls++);
    store.apply(frame());
    off();
    store.apply(frame());
    expect(calls).toBe(1);
  });
});
