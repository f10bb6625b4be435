"""General value function questions and online TD(lambda) learning.

A question is a (cumulant, discount) pair over the stimulus stream:

* ``Accumulation(gamma)`` -- cumulant 1 while the stimulus is present,
  constant discount gamma; the prediction rises ahead of a stimulus.
* ``Countdown`` -- constant cumulant 1, discount 1 that cuts to 0 at
  stimulus onset; the converged prediction counts steps until onset.

Both are on-policy; the co-agent takes no actions, so no off-policy
correction appears anywhere here.

``ideal_return`` computes the target return by direct truncated
summation and serves as the independent oracle for all prediction tests.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .temporal_repr import FeatureVector


@dataclass(frozen=True)
class Accumulation:
    gamma: float = 0.9

    def __post_init__(self):
        if not (0.0 <= self.gamma < 1.0):
            raise ValueError(f"accumulation discount must be in [0,1), got {self.gamma}")

    def cumulant(self, stimulus_present: bool) -> float:
        return 1.0 if stimulus_present else 0.0

    def discount(self, stimulus_present: bool) -> float:
        return self.gamma


@dataclass(frozen=True)
class Countdown:
    def cumulant(self, stimulus_present: bool) -> float:
        return 1.0

    def discount(self, stimulus_present: bool) -> float:
        return 0.0 if stimulus_present else 1.0


GvfQuestion = Accumulation | Countdown


class LearningDiverged(RuntimeError):
    """Raised when a TD update produces a non-finite error."""


class GvfLearner:
    """Linear TD(lambda) learner with accumulating eligibility traces."""

    def __init__(self, dim: int, alpha: float, lam: float = 0.9):
        if alpha <= 0:
            raise ValueError(f"step size must be positive, got {alpha}")
        if not (0.0 <= lam <= 1.0):
            raise ValueError(f"trace decay must be in [0,1], got {lam}")
        self.dim = dim
        self.alpha = alpha
        self.lam = lam
        self.w = np.zeros(dim)
        self.e = np.zeros(dim)

    def reset_trace(self):
        self.e[:] = 0.0

    def weights_json(self) -> str:
        return json.dumps(list(self.w))

    def load_weights_json(self, payload: str):
        w = np.asarray(json.loads(payload), dtype=float)
        if w.shape != (self.dim,):
            raise ValueError(f"weight payload has shape {w.shape}, expected ({self.dim},)")
        self.w = w


def predict(learner: GvfLearner, x: FeatureVector) -> float:
    """Inner product of the weights with a sparse binary feature vector."""
    if x.dimension != learner.dim:
        raise ValueError(f"feature dimension {x.dimension} != learner dimension {learner.dim}")
    return float(sum(learner.w[i] for i in x.active_indices))


def td_update(learner: GvfLearner, x_t: FeatureVector, c_next: float,
              gamma_next: float, x_next: FeatureVector) -> float:
    """One TD(lambda) step; returns the TD error.

    Order of operations: trace accumulation, error, weight update, trace
    decay.  A zero next-step discount therefore zeroes the post-update
    trace exactly.
    """
    if x_t.dimension != learner.dim or x_next.dimension != learner.dim:
        raise ValueError("feature dimension mismatch")
    for i in x_t.active_indices:
        learner.e[i] += 1.0
    v_t = sum(learner.w[i] for i in x_t.active_indices)
    v_next = sum(learner.w[i] for i in x_next.active_indices)
    delta = c_next + gamma_next * v_next - v_t
    if not math.isfinite(delta):
        raise LearningDiverged(f"non-finite TD error {delta}")
    learner.w += learner.alpha * delta * learner.e
    learner.e *= gamma_next * learner.lam
    return float(delta)


def ideal_return(schedule, question: GvfQuestion, t: int,
                 horizon: int, tol: float = 1e-9) -> float:
    """Directly evaluate the truncated return sum starting at step t.

    ``schedule`` is a sequence of stimulus booleans.  For accumulation
    questions the horizon must be long enough that the residual discount
    product is below ``tol``; countdown questions terminate at the first
    onset within the horizon.
    """
    if t + horizon >= len(schedule):
        raise ValueError("schedule too short for requested horizon")
    g = 0.0
    disc = 1.0
    for k in range(horizon):
        g += disc * question.cumulant(schedule[t + k + 1])
        disc *= question.discount(schedule[t + k + 1])
        if disc == 0.0:
            return g
    if disc >= tol:
        raise ValueError(
            f"horizon {horizon} leaves residual discount {disc:.3g} >= {tol:.3g}")
    return g
