"""Tabular Expected Sarsa control agent tests."""

import numpy as np
import pytest

from frosthollow.control import (N_ACTIONS, N_STATES, AgentState,
                                 ExpectedSarsaAgent, heat_level, state_decode,
                                 state_index)


def rng(seed=0):
    return np.random.default_rng(seed)


class TestStateIndex:
    def test_zero_state(self):
        assert state_index(AgentState(0, 0, 0, 0)) == 0

    def test_max_state(self):
        assert state_index(AgentState(1, 1, 6, 12)) == 363
        assert N_STATES == 364

    def test_flattening_order(self):
        # heat is the fastest axis, then location, presence, token
        assert state_index(AgentState(0, 0, 0, 1)) == 1
        assert state_index(AgentState(0, 0, 1, 0)) == 13
        assert state_index(AgentState(0, 1, 0, 0)) == 91
        assert state_index(AgentState(1, 0, 0, 0)) == 182

    def test_round_trip(self):
        r = rng(1)
        for _ in range(1000):
            s = AgentState(int(r.integers(2)), int(r.integers(2)),
                           int(r.integers(7)), int(r.integers(13)))
            assert state_decode(state_index(s)) == s

    def test_out_of_range_state(self):
        with pytest.raises(ValueError):
            state_index(AgentState(0, 0, 7, 0))
        with pytest.raises(ValueError):
            state_index(AgentState(0, 0, 0, 13))

    def test_out_of_range_index(self):
        with pytest.raises(ValueError):
            state_decode(364)

    def test_heat_level_granularity(self):
        assert heat_level(0.0) == 0
        assert heat_level(5.5) == 11
        assert heat_level(6.0) == 12


class TestPolicy:
    def test_probs_sum_to_one(self):
        agent = ExpectedSarsaAgent(epsilon=0.1, rng=rng())
        assert agent.policy_probs(AgentState(0, 0, 3, 0)).sum() == pytest.approx(1.0)

    def test_single_greedy_action(self):
        agent = ExpectedSarsaAgent(epsilon=0.3, rng=rng())
        s = AgentState(0, 0, 3, 0)
        agent.q[state_index(s)] = [0.0, 5.0, 0.0]
        assert list(agent.policy_probs(s)) == pytest.approx([0.1, 0.8, 0.1])

    def test_tied_greedy_mass_split(self):
        agent = ExpectedSarsaAgent(epsilon=0.3, rng=rng())
        s = AgentState(0, 0, 3, 0)
        agent.q[state_index(s)] = [5.0, 5.0, 0.0]
        assert list(agent.policy_probs(s)) == pytest.approx([0.45, 0.45, 0.1])

    def test_uniform_tie_breaking(self):
        # fresh table is all ties: each action should land 1/3 of the time
        agent = ExpectedSarsaAgent(epsilon=0.01, rng=rng(2))
        s = AgentState(0, 0, 3, 0)
        counts = {-1: 0, 0: 0, 1: 0}
        n = 100_000
        for _ in range(n):
            counts[agent.select_action(s)] += 1
        for a in counts:
            assert abs(counts[a] / n - 1 / 3) < 0.02

    def test_greedy_when_epsilon_zero(self):
        agent = ExpectedSarsaAgent(epsilon=0.0, rng=rng())
        s = AgentState(0, 0, 3, 0)
        agent.q[state_index(s)] = [0.0, 0.0, 2.0]
        assert all(agent.select_action(s) == 1 for _ in range(100))

    def test_uniform_when_epsilon_one(self):
        agent = ExpectedSarsaAgent(epsilon=1.0, rng=rng(3))
        s = AgentState(0, 0, 3, 0)
        agent.q[state_index(s)] = [0.0, 0.0, 2.0]
        n = 30_000
        counts = sum(agent.select_action(s) == -1 for _ in range(n))
        assert abs(counts / n - 1 / 3) < 0.02


class TestUpdate:
    def test_terminal_error_ignores_bootstrap(self):
        agent = ExpectedSarsaAgent(gamma=0.9, rng=rng())
        s = AgentState(0, 0, 3, 0)
        delta = agent.update(s, 0, 2.5, None)
        assert delta == pytest.approx(2.5 - 1.0)

    def test_zero_gamma_error_is_reward_minus_q(self):
        agent = ExpectedSarsaAgent(gamma=0.0, rng=rng())
        s = AgentState(0, 0, 3, 0)
        delta = agent.update(s, 1, 0.5, AgentState(0, 0, 4, 1))
        assert delta == pytest.approx(0.5 - 1.0)

    def test_trace_decays_by_gamma_lambda(self):
        agent = ExpectedSarsaAgent(gamma=0.5, lam=0.4, rng=rng())
        s = AgentState(0, 0, 3, 0)
        agent.update(s, 0, 0.0, AgentState(0, 0, 3, 1))
        assert agent.e[state_index(s), 1] == pytest.approx(0.5 * 0.4)

    def test_greedy_expectation_equals_max(self):
        # with epsilon = 0 the expected bootstrap is the row maximum,
        # so the update matches Q-learning on arbitrary tables
        r = rng(4)
        agent = ExpectedSarsaAgent(gamma=0.9, epsilon=0.0, rng=rng())
        for _ in range(50):
            agent.q = r.normal(size=agent.q.shape)
            agent.e[:] = 0.0
            s, s2 = AgentState(0, 0, 2, 5), AgentState(0, 1, 3, 0)
            q_before = agent.q[state_index(s), 0]
            expected_max = agent.q[state_index(s2)].max()
            delta = agent.update(s, -1, 1.0, s2)
            assert delta == pytest.approx(1.0 + 0.9 * expected_max - q_before)

    def test_two_state_chain_matches_bellman(self):
        # deterministic alternation s0 -> s1 (reward 1) -> s0 (reward 0)
        # under the uniform policy: V0 = 1 + g*V1, V1 = g*V0
        g = 0.9
        agent = ExpectedSarsaAgent(alpha=0.1, lam=0.0, gamma=g,
                                   epsilon=1.0, rng=rng(5))
        s0, s1 = AgentState(0, 0, 0, 0), AgentState(0, 0, 1, 0)
        state, nxt = s0, s1
        for _ in range(100_000):
            a = agent.select_action(state)
            reward = 1.0 if state == s0 else 0.0
            agent.update(state, a, reward, nxt)
            state, nxt = nxt, state
        v0 = agent.q[state_index(s0)].mean()
        v1 = agent.q[state_index(s1)].mean()
        assert v0 == pytest.approx(1.0 / (1.0 - g * g), abs=1e-3)
        assert v1 == pytest.approx(g / (1.0 - g * g), abs=1e-3)

    def test_optimism_decays_under_zero_reward(self):
        agent = ExpectedSarsaAgent(alpha=0.1, gamma=0.5, rng=rng())
        s = AgentState(0, 0, 3, 0)
        for _ in range(500):
            agent.update(s, 0, 0.0, None)
            agent.reset_trace()
        assert agent.q[state_index(s), 1] < 0.01


class TestCheckpoint:
    def test_round_trip(self):
        agent = ExpectedSarsaAgent(rng=rng(6))
        agent.q = rng(7).normal(size=agent.q.shape)
        other = ExpectedSarsaAgent(rng=rng())
        other.load_checkpoint_json(agent.checkpoint_json())
        assert np.array_equal(other.q, agent.q)

    def test_shape_preserved(self):
        agent = ExpectedSarsaAgent(rng=rng())
        other = ExpectedSarsaAgent(rng=rng())
        other.load_checkpoint_json(agent.checkpoint_json())
        assert other.q.shape == (N_STATES, N_ACTIONS)
