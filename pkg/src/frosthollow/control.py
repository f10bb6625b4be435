"""Tabular Expected Sarsa(lambda) control agent.

The agent's state is the co-agent token, the hazard presence bit, its
chain location, and its heat discretized at the 0.5 gain granularity.
The token is its only temporal information; nothing here reads the
hidden hazard phase.

State flattening is token-major: index = ((token * 2 + presence) * 7
+ location) * 13 + heat_level, a bijection onto [0, 364).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .env import ACTIONS

N_TOKEN = 2
N_PRESENCE = 2
N_LOCATIONS = 7
N_HEAT = 13
N_STATES = N_TOKEN * N_PRESENCE * N_LOCATIONS * N_HEAT
N_ACTIONS = len(ACTIONS)


@dataclass(frozen=True)
class AgentState:
    token: int
    presence: int
    location: int
    heat_level: int


def heat_level(heat: float, heat_rate: float = 0.5) -> int:
    return round(heat / heat_rate)


def state_index(s: AgentState) -> int:
    if not (0 <= s.token < N_TOKEN and 0 <= s.presence < N_PRESENCE
            and 0 <= s.location < N_LOCATIONS and 0 <= s.heat_level < N_HEAT):
        raise ValueError(f"agent state out of range: {s}")
    return ((s.token * N_PRESENCE + s.presence) * N_LOCATIONS + s.location) * N_HEAT \
        + s.heat_level


def state_decode(index: int) -> AgentState:
    if not (0 <= index < N_STATES):
        raise ValueError(f"state index out of range: {index}")
    index, heat = divmod(index, N_HEAT)
    index, location = divmod(index, N_LOCATIONS)
    token, presence = divmod(index, N_PRESENCE)
    return AgentState(token, presence, location, heat)


class ControlDiverged(RuntimeError):
    """Raised when an update produces a non-finite error."""


class ExpectedSarsaAgent:
    """Expected Sarsa(lambda) over the flattened tabular state space.

    Weights start at 1.0 (optimistic initialization drives early
    exploration); traces are accumulating and reset at episode start.
    """

    def __init__(self, alpha=0.01, lam=0.4, gamma=0.4, epsilon=0.01,
                 rng=None, init_value=1.0):
        self.alpha = alpha
        self.lam = lam
        self.gamma = gamma
        self.epsilon = epsilon
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.q = np.full((N_STATES, N_ACTIONS), float(init_value))
        self.e = np.zeros((N_STATES, N_ACTIONS))

    def reset_trace(self):
        self.e[:] = 0.0

    def _greedy_set(self, s_idx):
        row = self.q[s_idx]
        best = row.max()
        return [a for a in range(N_ACTIONS) if row[a] == best]

    def policy_probs(self, s: AgentState):
        """Exact epsilon-greedy probabilities, greedy mass split over ties."""
        s_idx = state_index(s)
        greedy = self._greedy_set(s_idx)
        probs = np.full(N_ACTIONS, self.epsilon / N_ACTIONS)
        for a in greedy:
            probs[a] += (1.0 - self.epsilon) / len(greedy)
        return probs

    def select_action(self, s: AgentState) -> int:
        """Epsilon-greedy with uniform random tie-breaking.  Returns -1/0/+1."""
        s_idx = state_index(s)
        if self.rng.random() < self.epsilon:
            return ACTIONS[self.rng.integers(0, N_ACTIONS)]
        greedy = self._greedy_set(s_idx)
        if len(greedy) == 1:
            return ACTIONS[greedy[0]]
        return ACTIONS[greedy[self.rng.integers(0, len(greedy))]]

    def update(self, s_t: AgentState, a_t: int, r_next: float,
               s_next: AgentState | None) -> float:
        """One Expected Sarsa(lambda) step; s_next None marks episode end.

        Returns the TD error.
        """
        si = state_index(s_t)
        ai = ACTIONS.index(a_t)
        self.e[si, ai] += 1.0
        if s_next is None:
            expected = 0.0
        else:
            probs = self.policy_probs(s_next)
            row = self.q[state_index(s_next)]
            expected = 0.0
            for a in range(N_ACTIONS):
                expected += probs[a] * row[a]
        delta = r_next + self.gamma * expected - self.q[si, ai]
        if not np.isfinite(delta):
            raise ControlDiverged(f"non-finite TD error {delta}")
        self.q += self.alpha * delta * self.e
        self.e *= self.gamma * self.lam
        return float(delta)

    def checkpoint_json(self) -> str:
        """Flat Q-table dump; layout is state-major per ``state_index``."""
        return json.dumps({
            "layout": "state_index-major, actions (-1, 0, +1)",
            "q": [float(v) for v in self.q.ravel()],
        })

    def load_checkpoint_json(self, payload: str):
        data = json.loads(payload)
        q = np.asarray(data["q"], dtype=float).reshape(N_STATES, N_ACTIONS)
        self.q = q
