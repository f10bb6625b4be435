"""Signalling co-agents: learned threshold signallers and baselines.

A Pavlovian co-agent owns a temporal representation and a GVF learner.
Each step it folds in the new stimulus bit, performs one online TD
update, and maps the fresh prediction through a fixed threshold to a
Boolean token.  The oracle co-agent reads hidden time-to-onset from the
environment and signals with exactly the configured lead; the null
co-agent never signals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gvf import Accumulation, Countdown, GvfLearner, GvfQuestion, predict, td_update
from .temporal_repr import ReprKind, ReprState, feature_dim, repr_step

RISING = "rising"
FALLING = "falling"


@dataclass(frozen=True)
class TokenRule:
    """Fixed threshold mapping a prediction to a Boolean token.

    Rising rules emit 1 strictly above the threshold (accumulation
    questions); falling rules emit 1 at or below it (countdowns).
    """

    tau: float
    direction: str

    def __post_init__(self):
        if self.direction not in (RISING, FALLING):
            raise ValueError(f"unknown token direction {self.direction!r}")

    def token(self, value: float) -> int:
        if self.direction == RISING:
            return 1 if value > self.tau else 0
        return 1 if value <= self.tau else 0


def default_rule(question: GvfQuestion, tau: float | None = None) -> TokenRule:
    """Pair a question with its conventional rule and threshold.

    Default thresholds suit the 7-location chain: 2.05 for accumulation,
    3.0 for countdown (three steps from heat to safety).
    """
    if isinstance(question, Accumulation):
        return TokenRule(2.05 if tau is None else tau, RISING)
    if isinstance(question, Countdown):
        return TokenRule(3.0 if tau is None else tau, FALLING)
    raise TypeError(f"unknown question {question!r}")


class PavlovianCoagent:
    """Learns a GVF over the stimulus stream and thresholds it to a token."""

    def __init__(self, repr_kind: ReprKind, question: GvfQuestion,
                 rule: TokenRule, alpha: float, lam: float = 0.9):
        if not (0.0 < alpha < 1.0):
            raise ValueError(f"GVF step size must be in (0,1), got {alpha}")
        self.repr_kind = repr_kind
        self.question = question
        self.rule = rule
        self.learner = GvfLearner(feature_dim(repr_kind), alpha, lam)
        self.repr_state = ReprState()
        self.prev_features = None
        self.value = 0.0

    def reset_episode(self):
        """New episode: clear temporal state and traces, keep weights."""
        self.repr_state = ReprState()
        self.prev_features = None
        self.learner.reset_trace()

    def step(self, stimulus_present: bool, hidden_time_to_onset=None) -> int:
        self.repr_state, x = repr_step(self.repr_state, self.repr_kind, stimulus_present)
        if self.prev_features is not None:
            td_update(
                self.learner,
                self.prev_features,
                self.question.cumulant(stimulus_present),
                self.question.discount(stimulus_present),
                x,
            )
        self.prev_features = x
        self.value = predict(self.learner, x)
        return self.rule.token(self.value)

    def diagnostics(self) -> dict:
        return {
            "value": self.value,
            "active": sorted(self.prev_features.active_indices) if self.prev_features else [],
        }


class OracleCoagent:
    """Non-learning upper bound: signals from hidden time-to-onset.

    Emits 1 whenever the hazard is at most ``lead_steps`` away or
    currently active (moving to safety is still the right call while the
    hazard blows).
    """

    def __init__(self, lead_steps: int):
        if lead_steps < 1:
            raise ValueError(f"lead must be positive, got {lead_steps}")
        self.lead_steps = lead_steps

    def reset_episode(self):
        pass

    def step(self, stimulus_present: bool, hidden_time_to_onset=None) -> int:
        if hidden_time_to_onset is None:
            raise ValueError("oracle co-agent requires hidden time-to-onset")
        if stimulus_present or hidden_time_to_onset <= self.lead_steps:
            return 1
        return 0


class NullCoagent:
    """Baseline that never signals."""

    def reset_episode(self):
        pass

    def step(self, stimulus_present: bool, hidden_time_to_onset=None) -> int:
        return 0


def token_trace(coagent, schedule, time_to_onset=None):
    """Run a co-agent over a stimulus schedule from a fresh episode state.

    ``time_to_onset`` supplies the oracle's hidden input, aligned with
    the schedule.  Returns the list of emitted tokens.
    """
    coagent.reset_episode()
    out = []
    for i, present in enumerate(schedule):
        tto = None if time_to_onset is None else time_to_onset[i]
        out.append(coagent.step(present, tto))
    return out
