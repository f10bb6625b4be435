"""Configuration-driven experiment runner.

Runs seeded, independent agent/co-agent learning runs, writes one CSV
per configuration (columns run,episode,reward) plus a JSON summary, and
provides the default sweep grid over representations, questions, GVF
learning rates and hazard conditions.

Two execution paths exist: a compiled kernel (``fastloop``) used for
sweeps, and a plain-object reference loop used for per-step trace dumps
and as the semantic anchor in tests.  Identical config and seed give
byte-identical CSV output on either path's repeated invocations.
"""

from __future__ import annotations

import dataclasses
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fastloop
from .coagent import (NullCoagent, OracleCoagent, PavlovianCoagent, TokenRule,
                      default_rule)
from .control import AgentState, ExpectedSarsaAgent, heat_level
from .env import (Drift, EnvConfig, Fixed, FrostHollow, HazardConfig,
                  RandomIsi)
from .gvf import Accumulation, Countdown, ideal_return
from .temporal_repr import Bias, BitCascade, TiledTrace, repr_step, ReprState

EARLY_WINDOW = 800      # first episodes, matching early-learning curves
ASYMPTOTIC_WINDOW = 1000  # last episodes, matching asymptotic box plots


# --------------------------------------------------------------------------
# Configuration


@dataclass(frozen=True)
class CoagentConfig:
    kind: str = "none"            # none | oracle | pavlovian
    lead_steps: int = 3
    repr: str = "bc"              # bias | bc | tct
    n: int = 16
    a: float = 0.6
    question: str = "countdown"   # accumulation | countdown
    gamma: float = 0.9
    alpha: float = 0.01
    lam: float = 0.9
    tau: float | None = None

    def repr_kind(self):
        if self.repr == "bias":
            return Bias()
        if self.repr == "bc":
            return BitCascade(self.n)
        if self.repr == "tct":
            return TiledTrace(self.n, self.a)
        raise ValueError(f"unknown representation {self.repr!r}")

    def gvf_question(self):
        if self.question == "accumulation":
            return Accumulation(self.gamma)
        if self.question == "countdown":
            return Countdown()
        raise ValueError(f"unknown question {self.question!r}")

    def rule(self) -> TokenRule:
        return default_rule(self.gvf_question(), self.tau)


@dataclass(frozen=True)
class ControlConfig:
    alpha: float = 0.01
    # Short credit horizon: reward follows a well-timed retreat within a
    # couple of hazard cycles, and longer horizons let the learner mine
    # the heat level as a clock, inflating the no-co-agent baseline.
    lam: float = 0.4
    gamma: float = 0.4
    epsilon: float = 0.01
    init_value: float = 1.0


@dataclass(frozen=True)
class ExperimentConfig:
    name: str = "experiment"
    env: EnvConfig = field(default_factory=EnvConfig)
    coagent: CoagentConfig = field(default_factory=CoagentConfig)
    control: ControlConfig = field(default_factory=ControlConfig)
    n_runs: int = 30
    n_episodes: int = 5000
    seed_base: int = 0

    def run_seed(self, run_index: int) -> int:
        return self.seed_base + run_index


def _condition_to_dict(cond):
    if isinstance(cond, Fixed):
        return {"condition": "fixed", "isi": cond.isi}
    if isinstance(cond, RandomIsi):
        return {"condition": "random", "lo": cond.lo, "hi": cond.hi}
    return {"condition": "drift", "start": cond.start, "delta": cond.delta,
            "min": cond.min, "max": cond.max, "exclude_zero": cond.exclude_zero}


def _condition_from_dict(d):
    c = d.get("condition", "fixed")
    if c == "fixed":
        return Fixed(d.get("isi", 8))
    if c == "random":
        return RandomIsi(d.get("lo", 5), d.get("hi", 10))
    if c == "drift":
        return Drift(d.get("start", 8), d.get("delta", 1), d.get("min", 6),
                     d.get("max", 11), d.get("exclude_zero", False))
    raise ValueError(f"unknown hazard condition {c!r}")


def config_to_dict(cfg: ExperimentConfig) -> dict:
    env = cfg.env
    return {
        "name": cfg.name,
        "env": {
            **_condition_to_dict(env.hazard.condition),
            "stimulus_length": env.hazard.stimulus_length,
            "n_locations": env.n_locations,
            "heat_rate": env.heat_rate,
            "heat_capacity": env.heat_capacity,
            "episode_length": env.episode_length,
            "heat_locations": list(env.heat_locations),
        },
        "coagent": dataclasses.asdict(cfg.coagent),
        "control": dataclasses.asdict(cfg.control),
        "n_runs": cfg.n_runs,
        "n_episodes": cfg.n_episodes,
        "seed_base": cfg.seed_base,
    }


def config_from_dict(d: dict) -> ExperimentConfig:
    env_d = dict(d.get("env", {}))
    hazard = HazardConfig(_condition_from_dict(env_d),
                          env_d.get("stimulus_length", 2))
    env = EnvConfig(
        n_locations=env_d.get("n_locations", 7),
        heat_rate=env_d.get("heat_rate", 0.5),
        heat_capacity=env_d.get("heat_capacity", 6.0),
        episode_length=env_d.get("episode_length", 1000),
        hazard=hazard,
        heat_locations=tuple(env_d.get("heat_locations", (2, 3, 4))),
    )
    co = CoagentConfig(**d.get("coagent", {}))
    ctl = ControlConfig(**d.get("control", {}))
    return ExperimentConfig(
        name=d.get("name", "experiment"),
        env=env, coagent=co, control=ctl,
        n_runs=d.get("n_runs", 30),
        n_episodes=d.get("n_episodes", 5000),
        seed_base=d.get("seed_base", 0),
    )


def load_config(path) -> ExperimentConfig:
    return config_from_dict(json.loads(Path(path).read_text()))


# --------------------------------------------------------------------------
# Running


@dataclass
class RunRecord:
    run_index: int
    rewards: np.ndarray        # per-episode accumulated reward
    wall_clock: float
    failed: bool = False


def build_coagent(cfg: CoagentConfig):
    if cfg.kind == "none":
        return NullCoagent()
    if cfg.kind == "oracle":
        return OracleCoagent(cfg.lead_steps)
    if cfg.kind == "pavlovian":
        return PavlovianCoagent(cfg.repr_kind(), cfg.gvf_question(),
                                cfg.rule(), cfg.alpha, cfg.lam)
    raise ValueError(f"unknown co-agent kind {cfg.kind!r}")


def _fastloop_args(cfg: ExperimentConfig, run_index: int, q_init=None,
                   trace_cut=1e-12):
    env = cfg.env
    co = cfg.coagent
    ctl = cfg.control
    heat_locs = sorted(env.heat_locations)
    if heat_locs != list(range(heat_locs[0], heat_locs[-1] + 1)):
        raise ValueError("fast path requires a contiguous heat region")
    cond = env.hazard.condition
    if isinstance(cond, Fixed):
        cond_type, p0, p1, p2, p3, xz = fastloop.COND_FIXED, cond.isi, 0, 0, 0, False
    elif isinstance(cond, RandomIsi):
        cond_type, p0, p1, p2, p3, xz = fastloop.COND_RANDOM, cond.lo, cond.hi, 0, 0, False
    else:
        cond_type, p0, p1, p2, p3, xz = (fastloop.COND_DRIFT, cond.start,
                                         cond.delta, cond.min, cond.max,
                                         cond.exclude_zero)
    co_kind = {"none": fastloop.CO_NONE, "oracle": fastloop.CO_ORACLE,
               "pavlovian": fastloop.CO_PAVLOVIAN}[co.kind]
    repr_type = {"bias": fastloop.REPR_BIAS, "bc": fastloop.REPR_BC,
                 "tct": fastloop.REPR_TCT}[co.repr]
    repr_n = 1 if co.repr == "bias" else co.n
    rule = co.rule()
    rising = rule.direction == "rising"
    q_type = (fastloop.Q_ACCUMULATION if co.question == "accumulation"
              else fastloop.Q_COUNTDOWN)
    n_states = 2 * 2 * env.n_locations * fastloop.N_HEAT
    if q_init is None:
        q_init = np.full(n_states * fastloop.N_ACTIONS, float(ctl.init_value))
    return (
        cfg.run_seed(run_index), cfg.n_episodes, env.episode_length,
        env.n_locations, env.heat_rate, env.heat_capacity,
        heat_locs[0], heat_locs[-1],
        cond_type, p0, p1, p2, p3, xz, env.hazard.stimulus_length,
        co_kind, co.lead_steps, repr_type, repr_n, co.a,
        q_type, co.gamma, co.alpha, co.lam, rule.tau, rising,
        ctl.alpha, ctl.lam, ctl.gamma, ctl.epsilon, q_init, trace_cut,
    )


def run_single(cfg: ExperimentConfig, run_index: int, q_init=None,
               trace_cut=1e-12) -> RunRecord:
    """One seeded run on the compiled path."""
    t0 = time.perf_counter()
    rewards, q, gw = fastloop.run_control(
        *_fastloop_args(cfg, run_index, q_init=q_init, trace_cut=trace_cut))
    failed = bool(rewards[-1] < 0)
    rec = RunRecord(run_index, rewards, time.perf_counter() - t0, failed)
    rec.q_table = q
    rec.gvf_weights = gw
    return rec


def run_reference(cfg: ExperimentConfig, run_index: int, trace_writer=None,
                  q_init=None):
    """One seeded run on the plain-object path.

    Slower than ``run_single`` but supports per-step diagnostics:
    ``trace_writer`` receives one dict per step when set.  Returns
    (RunRecord, agent, coagent) so callers can inspect learned state.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.run_seed(run_index))
    env = FrostHollow(cfg.env, rng)
    coagent = build_coagent(cfg.coagent)
    agent = ExpectedSarsaAgent(
        alpha=cfg.control.alpha, lam=cfg.control.lam, gamma=cfg.control.gamma,
        epsilon=cfg.control.epsilon, init_value=cfg.control.init_value, rng=rng)
    if q_init is not None:
        agent.q = np.asarray(q_init, dtype=float).reshape(agent.q.shape).copy()
    rewards = np.zeros(cfg.n_episodes, dtype=np.int64)
    failed = False
    for ep in range(cfg.n_episodes):
        obs = env.reset()
        coagent.reset_episode()
        agent.reset_trace()
        token = coagent.step(obs.hazard_active, env.time_to_onset)
        s = AgentState(token, int(obs.hazard_active), obs.location,
                       heat_level(obs.heat, cfg.env.heat_rate))
        total = 0
        try:
            for t in range(cfg.env.episode_length):
                a = agent.select_action(s)
                obs, r, done = env.step(a)
                token = coagent.step(obs.hazard_active, env.time_to_onset)
                s_next = AgentState(token, int(obs.hazard_active), obs.location,
                                    heat_level(obs.heat, cfg.env.heat_rate))
                agent.update(s, a, r, None if done else s_next)
                if trace_writer is not None:
                    rec = {"episode": ep, "step": t, "location": obs.location,
                           "heat": obs.heat, "hazard": int(obs.hazard_active),
                           "action": a, "token": token, "reward": r}
                    if isinstance(coagent, PavlovianCoagent):
                        rec.update(coagent.diagnostics())
                    trace_writer(rec)
                s = s_next
                total += r
        except RuntimeError:
            failed = True
            rewards[ep:] = -1
            break
        rewards[ep] = total
    record = RunRecord(run_index, rewards, time.perf_counter() - t0, failed)
    return record, agent, coagent


def run_experiment(cfg: ExperimentConfig, workers: int = 1,
                   use_reference: bool = False, trace_writer=None):
    """Execute all runs of a configuration; returns list of RunRecord.

    Runs are independent and identically ordered regardless of worker
    count.  The reference path is selected automatically when a trace
    writer is supplied.
    """
    if trace_writer is not None:
        use_reference = True
    if use_reference:
        return [run_reference(cfg, i, trace_writer)[0] for i in range(cfg.n_runs)]
    if workers <= 1 or cfg.n_runs == 1:
        return [run_single(cfg, i) for i in range(cfg.n_runs)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_single, cfg, i) for i in range(cfg.n_runs)]
        return [f.result() for f in futures]


# --------------------------------------------------------------------------
# Output and statistics


def write_csv(records, path):
    """CSV with columns run,episode,reward; deterministic byte layout."""
    lines = ["run,episode,reward"]
    for rec in sorted(records, key=lambda r: r.run_index):
        for ep, r in enumerate(rec.rewards):
            lines.append(f"{rec.run_index},{ep},{int(r)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path):
    """Inverse of write_csv; returns list of RunRecord (no timing info)."""
    rows = Path(path).read_text().strip().split("\n")[1:]
    by_run = {}
    for row in rows:
        run, ep, r = row.split(",")
        by_run.setdefault(int(run), []).append(int(r))
    return [RunRecord(i, np.asarray(by_run[i], dtype=np.int64), 0.0,
                      failed=bool(by_run[i][-1] < 0))
            for i in sorted(by_run)]


def window_slice(n_episodes: int, window) -> slice:
    """Resolve a window spec: 'early', 'asymptotic', or (start, stop)."""
    if window == "early":
        return slice(0, min(EARLY_WINDOW, n_episodes))
    if window == "asymptotic":
        return slice(max(0, n_episodes - ASYMPTOTIC_WINDOW), n_episodes)
    start, stop = window
    return slice(start, stop)


def summarize(records, window="asymptotic") -> dict:
    """Per-config stats over runs' window-mean rewards.

    Quantiles use linear interpolation (numpy default); the 95% CI is a
    normal approximation over runs; whiskers extend 1.5 IQR beyond the
    quartiles, clipped to the data range.
    """
    ok = [r for r in records if not r.failed]
    n_episodes = len(records[0].rewards)
    sl = window_slice(n_episodes, window)
    if sl.stop - sl.start <= 0:
        raise ValueError(f"empty summary window {window!r}")
    per_run = np.array([r.rewards[sl].mean() for r in ok])
    q1, med, q3 = np.percentile(per_run, [25, 50, 75])
    iqr = q3 - q1
    sd = per_run.std(ddof=1) if len(per_run) > 1 else 0.0
    half = 1.96 * sd / np.sqrt(len(per_run))
    return {
        "n_runs": len(ok),
        "n_failed": len(records) - len(ok),
        "window": [sl.start, sl.stop],
        "mean": float(per_run.mean()),
        "median": float(med),
        "q1": float(q1),
        "q3": float(q3),
        "whisker_lo": float(max(per_run.min(), q1 - 1.5 * iqr)),
        "whisker_hi": float(min(per_run.max(), q3 + 1.5 * iqr)),
        "ci95": [float(per_run.mean() - half), float(per_run.mean() + half)],
        "per_run_mean": [float(v) for v in per_run],
    }


def run_and_save(cfg: ExperimentConfig, out_dir, workers: int = 1,
                 trace: bool = False) -> dict:
    """Run a config, write <name>.csv and <name>.summary.json, return summary."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trace_writer = None
    trace_file = None
    if trace:
        trace_file = (out / f"{cfg.name}.trace.jsonl").open("w")
        trace_writer = lambda rec: trace_file.write(json.dumps(rec) + "\n")
    try:
        records = run_experiment(cfg, workers=workers, trace_writer=trace_writer)
    finally:
        if trace_file is not None:
            trace_file.close()
    write_csv(records, out / f"{cfg.name}.csv")
    summary = {"config": config_to_dict(cfg),
               "early": summarize(records, "early"),
               "asymptotic": summarize(records, "asymptotic")}
    (out / f"{cfg.name}.summary.json").write_text(json.dumps(summary, indent=2))
    return summary


# --------------------------------------------------------------------------
# Default sweep grid


def default_sweep(n_runs=30, n_episodes=5000, seed_base=0):
    """The full comparison grid plus oracle and no-co-agent baselines."""
    conditions = {
        "fixed": Fixed(), "random": RandomIsi(), "drift": Drift(),
    }
    reprs = [("bias", CoagentConfig(kind="pavlovian", repr="bias")),
             ("bc", CoagentConfig(kind="pavlovian", repr="bc")),
             ("tct3", CoagentConfig(kind="pavlovian", repr="tct", a=0.3)),
             ("tct6", CoagentConfig(kind="pavlovian", repr="tct", a=0.6))]
    configs = []
    for cond_name, cond in conditions.items():
        env = EnvConfig(hazard=HazardConfig(cond), episode_length=1000)
        common = dict(env=env, n_runs=n_runs, n_episodes=n_episodes,
                      seed_base=seed_base)
        configs.append(ExperimentConfig(
            name=f"none_{cond_name}", coagent=CoagentConfig(kind="none"), **common))
        configs.append(ExperimentConfig(
            name=f"oracle_{cond_name}", coagent=CoagentConfig(kind="oracle"), **common))
        for repr_name, base in reprs:
            for question in ("accumulation", "countdown"):
                for alpha in (0.01, 0.1):
                    co = dataclasses.replace(base, question=question, alpha=alpha)
                    configs.append(ExperimentConfig(
                        name=f"{repr_name}_{question}_{alpha}_{cond_name}",
                        coagent=co, **common))
    return configs


# --------------------------------------------------------------------------
# Prediction probe


def periodic_schedule(isi: int, stim_len: int, n_cycles: int):
    """Stimulus booleans for a fixed condition as the co-agent sees them:
    each cycle is isi inactive steps followed by stim_len active ones."""
    return ([False] * isi + [True] * stim_len) * n_cycles


def ideal_phase_returns(question, isi: int, stim_len: int):
    """Brute-force target return at each phase of one cycle."""
    cycle = isi + stim_len
    # horizon long enough that the residual discount is below the
    # oracle tolerance; countdowns terminate at the first onset
    horizon = cycle + 2
    if isinstance(question, Accumulation) and question.gamma > 0.0:
        needed = math.ceil(math.log(1e-9) / math.log(question.gamma)) + 1
        horizon = max(horizon, needed)
    n_cycles = 2 * (horizon // cycle + 4)
    sched = periodic_schedule(isi, stim_len, n_cycles)
    base = cycle * (n_cycles // 2 - 1)
    return [ideal_return(sched, question, base + p, horizon)
            for p in range(cycle)]


def prediction_probe(coagent: PavlovianCoagent, isi: int = 8,
                     stim_len: int = 2, n_cycles: int = 100) -> dict:
    """Train a co-agent alone on a fixed schedule; report per-phase error.

    Returns the online prediction for every step, the per-cycle max
    absolute error over the inactive (inter-stimulus) phases against the
    brute-force target, and the final cycle's per-phase predictions.
    Error is not scored on the stimulus steps themselves: every present
    step resets the temporal code, so those steps share one feature
    vector and no linear predictor can separate their targets.
    """
    cycle = isi + stim_len
    ideal = ideal_phase_returns(coagent.question, isi, stim_len)
    schedule = periodic_schedule(isi, stim_len, n_cycles)
    coagent.reset_episode()
    values = []
    for present in schedule:
        coagent.step(present)
        values.append(coagent.value)
    per_cycle_max_err = []
    for c in range(n_cycles):
        errs = [abs(values[c * cycle + p] - ideal[p]) for p in range(isi)]
        per_cycle_max_err.append(max(errs))
    final = values[-cycle:]
    return {
        "cycle_length": cycle,
        "ideal": ideal,
        "values": values,
        "per_cycle_max_err": per_cycle_max_err,
        "final_cycle": final,
        # slope of the prediction over the 3 steps before the next onset
        "preonset_slope": final[isi - 1] - final[isi - 3],
    }
