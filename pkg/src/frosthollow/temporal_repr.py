"""Temporal feature representations for the signalling co-agent.

The co-agent observes a single stimulus bit per step.  Its state features
are that presence bit concatenated with a one-hot temporal code tracking
time since the stimulus was last present.  Three codes are supported:

* ``Bias`` -- a single always-on unit (no temporal resolution).
* ``BitCascade`` -- the active bit advances one position per step and
  saturates at the last position.
* ``TiledTrace`` -- the active bit advances at an exponentially slowing
  rate: a trace z(t) = exp(-a*t) is binned into n equal-width bins over
  (0, 1], so later positions cover increasingly long spans of time.

Feature layout is fixed: index 0 is the presence bit, indices 1..n are
the temporal one-hot code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class Bias:
    """Single constant temporal unit; cannot distinguish times."""

    n = 1

    def __repr__(self):
        return "Bias()"

    def __eq__(self, other):
        return isinstance(other, Bias)


@dataclass(frozen=True)
class BitCascade:
    """One-hot code advancing one position per step, saturating at n-1."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"BitCascade length must be positive, got {self.n}")


@dataclass(frozen=True)
class TiledTrace:
    """One-hot code driven by the trace exp(-a*t), binned into n bins."""

    n: int
    a: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"TiledTrace length must be positive, got {self.n}")
        if not (0.0 < self.a < 1.0):
            raise ValueError(f"TiledTrace decay must be in (0, 1), got {self.a}")


ReprKind = Bias | BitCascade | TiledTrace


@dataclass
class ReprState:
    """Steps elapsed since the stimulus was last present."""

    steps_since_reset: int = 0


@dataclass(frozen=True)
class FeatureVector:
    """Sparse binary feature vector: presence bit + temporal one-hot."""

    dimension: int
    active_indices: frozenset[int] = field(default_factory=frozenset)

    def dense(self):
        import numpy as np

        x = np.zeros(self.dimension)
        for i in self.active_indices:
            x[i] = 1.0
        return x


def feature_dim(kind: ReprKind) -> int:
    """Total feature dimension: presence bit plus temporal code length."""
    return 1 + kind.n


def temporal_index(kind: ReprKind, steps_since_reset: int) -> int:
    """Active position in the temporal one-hot code for a given elapsed time."""
    if isinstance(kind, Bias):
        return 0
    if isinstance(kind, BitCascade):
        return min(kind.n - 1, steps_since_reset)
    # TiledTrace: bin the trace z = exp(-a*t) over (0, 1] into n equal bins.
    z = math.exp(-kind.a * steps_since_reset)
    return min(kind.n - 1, int(kind.n * (1.0 - z)))


def repr_step(state: ReprState, kind: ReprKind, stimulus_present: bool):
    """Advance the representation one step and emit the post-update features.

    Returns (new_state, FeatureVector).  The elapsed-time counter resets to
    zero on any step where the stimulus is present; otherwise it advances.
    """
    if stimulus_present:
        steps = 0
    else:
        steps = state.steps_since_reset + 1
    new_state = ReprState(steps_since_reset=steps)
    idx = temporal_index(kind, steps)
    active = {1 + idx}
    if stimulus_present:
        active.add(0)
    return new_state, FeatureVector(feature_dim(kind), frozenset(active))


def saturation_index(kind: ReprKind) -> int:
    """Largest reachable temporal index; all late times alias onto it."""
    if isinstance(kind, Bias):
        raise ValueError("Bias representation has no saturation index")
    return kind.n - 1
