/**
 * Wire-protocol conformance: the scripted headless client completes a
 * five-minute trial on a fixed 20 s schedule and the token precedes at
 * least 80% of hazard onsets from the third pulse onward by the
 * required lead.
 */

import { describe, expect, it } from "vitest";

import { runScriptedTrial } from "../src/headless.js";
import { FakeServerSocket } from "./fakeServer.js";

function runTrial(opts = {}) {
  const fakes: FakeServerSocket[] = [];
  const promise = runScriptedTrial(
    {
      url: "ws://test/ws",
      makeSocket: () => {
        const s = new FakeServerSocket(opts);
        fakes.push(s);
        return s;
      },
      setTimer: () => 0,
    },
    { trialId: 0, speed: 2.0 },
  );
  fakes[0].open();
  return { promise, fakes };
}

describe("scripted headless trial", () => {
  it("completes a 5-minute fixed-schedule trial and scores it", async () => {
    const { promise } = runTrial();
    const result = await promise;

    // full trial: one frame per tick plus the trial_end message
    expect(result.frames).toHaveLength(300 / 0.05 - 1);
    expect(result.summary.ticks).toBe(6000);

    // ~12 pulses at a 24 s cycle over 300 s
    const pulses = result.signal.pulses;
    expect(pulses.length).toBeGreaterThanOrEqual(10);

    // token precedes >= 80% of onsets from the third pulse onward
    const later = pulses.slice(2);
    const useful = later.filter((p) => p.useful).length;
    expect(useful / later.length).toBeGreaterThanOrEqual(0.8);

    // the script actually banks heat between pulses
    expect(result.summary.score).toBeGreaterThan(0);

    // metrics compute from the log without error
    expect(result.wasted.total).toBeGreaterThan(0);
    expect(result.wasted.perGap.length).toBeGreaterThanOrEqual(10);
  });

  it("retreats before every signalled onset", async () => {
    const { promise } = runTrial();
    const result = await promise;
    let hits = 0;
    for (const f of result.frames) {
      if (f.hazard && Math.abs(f.pos) <= 1.0) hits += 1;
    }
    // a few ticks of transit are tolerable; sitting through a pulse is not
    expect(hits).toBeLessThan(40);
  });

  it("rejects when the connection dies before any state", async () => {
    const fakes: FakeServerSocket[] = [];
    const promise = runScriptedTrial({
      url: "ws://test/ws",
      makeSocket: () => {
        const s = new FakeServerSocket();
        fakes.push(s);
        return s;
      },
      setTimer: () => 0,
    });
    fakes[0].close();
    await expect(promise).rejects.toThrow(/closed/);
  });
});
