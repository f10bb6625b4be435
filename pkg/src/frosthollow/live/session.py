"""Tick-driven session logic for real-time human play.

A session owns the continuous corridor environment, an online-learning
co-agent, and the trial log.  All state advances synchronously in
``tick()``, so the whole loop runs in virtual time under test; the
websocket server is a thin real-time shell around it.

Co-agent timescales are expressed in ticks.  At the default 50 ms tick a
20 s inter-stimulus interval is 400 ticks, so the cascade length and the
prediction discount are derived from the configured schedule rather than
reusing the abstract-domain constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..coagent import NullCoagent, OracleCoagent, PavlovianCoagent, TokenRule, RISING
from ..env import (ContinuousConfig, ContinuousFrostHollow, Drift, Fixed,
                   HazardCondition, RandomIsi)
from ..gvf import Accumulation, ideal_return
from ..temporal_repr import BitCascade, TiledTrace


@dataclass(frozen=True)
class SessionConfig:
    env: ContinuousConfig = field(default_factory=ContinuousConfig)
    # "bc" | "tct" | "oracle" | "none"; None picks from the 9-trial block
    coagent_kind: str | None = "tct"
    # the token should precede hazard onset by this much once trained
    lead_seconds: float = 2.5
    gvf_alpha: float = 0.05
    gvf_lam: float = 0.8
    gvf_gamma: float = 0.95
    seed: int = 0
    # the first interval of each trial is shortened by up to this much
    isi_jitter_seconds: float = 0.0


def trial_plan(cfg: SessionConfig):
    """The 9-trial randomized block: co-agent options x conditions."""
    isi = cfg.env.isi_seconds
    conditions = [
        Fixed(isi),
        RandomIsi(max(1, round(isi * 0.75)), round(isi * 1.25)),
        Drift(round(isi), 1, round(isi * 0.75), round(isi * 1.25)),
    ]
    block = [(kind, cond) for kind in ("none", "bc", "tct")
             for cond in conditions]
    order = np.random.default_rng(cfg.seed).permutation(len(block))
    return [block[i] for i in order]


def _pow2_at_least(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def build_live_coagent(cfg: SessionConfig, kind: str,
                       condition: HazardCondition):
    """Co-agent with timescales scaled to the session tick.

    The accumulation discount is set so the upcoming stimulus dominates
    the prediction about one interval out, and the threshold is the
    ideal prediction exactly ``lead_seconds`` before onset on the base
    fixed schedule, so the token rises with the configured lead once the
    predictions converge.
    """
    env = cfg.env
    hz = replace(env, condition=condition).hazard_ticks()
    stim_ticks = hz.stimulus_length
    isi_ticks = (condition.isi if isinstance(condition, Fixed)
                 else env.isi_seconds)
    isi_ticks = max(1, round(isi_ticks / env.tick))
    lead_ticks = max(1, round(cfg.lead_seconds / env.tick))

    if kind == "none":
        return NullCoagent()
    if kind == "oracle":
        return OracleCoagent(lead_ticks)

    horizon = isi_ticks + stim_ticks
    if kind == "bc":
        # one-hot long enough for the longest gap plus the pulse
        repr_kind = BitCascade(_pow2_at_least(horizon + stim_ticks + 2))
    elif kind == "tct":
        # tiles widen toward onset, so near-onset values generalize
        # across ~2 s of ticks and converge within a couple of pulses;
        # decay stretched past one gap so the final pre-onset ticks do
        # not spill into a fresh unlearned tile
        n = 64
        repr_kind = TiledTrace(n, math.log(n) / (horizon + stim_ticks))
    else:
        raise ValueError(f"unknown live co-agent kind {kind!r}")

    question = Accumulation(cfg.gvf_gamma)
    cycle = [False] * isi_ticks + [True] * stim_ticks
    tau = ideal_return(cycle * 40, question, isi_ticks - lead_ticks,
                       horizon * 8)
    rule = TokenRule(tau, RISING)
    return PavlovianCoagent(repr_kind, question, rule,
                            alpha=cfg.gvf_alpha, lam=cfg.gvf_lam)


class Session:
    """One player's session: a sequence of independent timed trials."""

    def __init__(self, cfg: SessionConfig):
        self.cfg = cfg
        self.plan = trial_plan(cfg)
        self.env = None
        self.coagent = None
        self.records = []
        self.score = 0
        self.trial_id = None

    @property
    def trial_active(self) -> bool:
        return self.env is not None

    def start_trial(self, trial_id: int):
        cfg = self.cfg
        kind, condition = self.plan[trial_id % len(self.plan)]
        if cfg.coagent_kind is not None:
            kind = cfg.coagent_kind
        if cfg.env.condition is not None:
            condition = cfg.env.condition
        rng = np.random.default_rng((cfg.seed, trial_id))
        self.env = ContinuousFrostHollow(replace(cfg.env, condition=condition),
                                         rng)
        if cfg.isi_jitter_seconds > 0:
            cut = int(rng.integers(0, round(cfg.isi_jitter_seconds
                                            / cfg.env.tick) + 1))
            sched = self.env.schedule
            sched.inactive_remaining = max(1, sched.inactive_remaining - cut)
        self.coagent = build_live_coagent(cfg, kind, condition)
        self.coagent.reset_episode()
        self.records = []
        self.score = 0
        self.trial_id = trial_id
        self.coagent_kind = kind

    def tick(self, vx: float, bank: bool) -> dict:
        """Advance one tick; returns the state broadcast (or trial end)."""
        if not self.trial_active:
            return {"type": "notice", "message": "no active trial"}
        obs, reward, done = self.env.step(vx, bank)
        token = self.coagent.step(obs.hazard_active,
                                  self.env.ticks_until_onset)
        self.score += reward
        t = self.env.tick_count * self.cfg.env.tick
        self.records.append({
            "t": t,
            "pos": obs.position,
            "region": self.env.region(),
            "hazard": obs.hazard_active,
            "heat": obs.heat,
            "token": token,
            "score": self.score,
            "vx": vx,
            "bank": bank,
        })
        remaining = self.cfg.env.trial_length - t
        if done:
            summary = self.trial_summary()
            self.env = None
            return {"type": "trial_end", "summary": summary}
        return {
            "type": "state",
            "t": t,
            "pos": obs.position,
            "hazard": obs.hazard_active,
            "heat": obs.heat,
            "token": token,
            "score": self.score,
            "remaining": remaining,
        }

    def trial_summary(self) -> dict:
        from .metrics import wasted_steps

        wasted = wasted_steps(self.records)
        return {
            "trial_id": self.trial_id,
            "coagent": self.coagent_kind,
            "score": self.score,
            "ticks": len(self.records),
            "wasted_steps": wasted["total"],
        }
