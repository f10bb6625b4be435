"""Hazard schedule and environment dynamics tests."""

import numpy as np
import pytest
from scipy import stats

from frosthollow.env import (ACTIONS, ContinuousConfig, ContinuousFrostHollow,
                             Drift, EnvConfig, Fixed, FrostHollow,
                             HazardConfig, HazardSchedule, RandomIsi,
                             initial_isi, next_isi)


def rng(seed=0):
    return np.random.default_rng(seed)


class TestConditions:
    def test_reversed_random_bounds_rejected(self):
        with pytest.raises(ValueError):
            RandomIsi(10, 5)

    def test_drift_start_outside_bounds_rejected(self):
        with pytest.raises(ValueError):
            Drift(start=5, min=6, max=11)

    def test_fixed_initial_and_next(self):
        cfg = HazardConfig(Fixed(8))
        assert initial_isi(cfg, rng()) == 8
        assert next_isi(cfg, 8, rng()) == 8

    def test_random_isi_uniform(self):
        cfg = HazardConfig(RandomIsi(5, 10))
        r = rng(1)
        draws = [next_isi(cfg, 8, r) for _ in range(100_000)]
        counts = [draws.count(v) for v in range(5, 11)]
        assert sum(counts) == len(draws)  # nothing outside [5, 10]
        _, p = stats.chisquare(counts)
        assert p > 0.01

    def test_drift_stays_in_bounds_with_unit_steps(self):
        cfg = HazardConfig(Drift(8, 1, 6, 11))
        r = rng(2)
        isi = initial_isi(cfg, r)
        seen_steps = set()
        for _ in range(1_000_000):
            nxt = next_isi(cfg, isi, r)
            assert 6 <= nxt <= 11
            if 6 < isi < 11:
                seen_steps.add(nxt - isi)
            isi = nxt
        assert seen_steps == {-1, 0, 1}

    def test_drift_exclude_zero_never_holds(self):
        cfg = HazardConfig(Drift(8, 1, 6, 11, exclude_zero=True))
        r = rng(3)
        isi = 8
        for _ in range(10_000):
            nxt = next_isi(cfg, isi, r)
            if 6 < isi < 11:
                assert nxt != isi
            isi = nxt


class TestSchedule:
    def test_fixed_periodicity(self):
        sched = HazardSchedule(HazardConfig(Fixed(8)), rng())
        bits = []
        for _ in range(100):
            sched.advance()
            bits.append(sched.active)
        # the onset lands on the advance that exhausts the inactive count,
        # so the pattern sits one step ahead of the naive 8-off/2-on tiling
        assert bits == (([False] * 8 + [True] * 2) * 11)[1:101]

    def test_steps_until_onset_countdown(self):
        sched = HazardSchedule(HazardConfig(Fixed(8)), rng())
        seen = []
        for _ in range(20):
            sched.advance()
            seen.append(sched.steps_until_onset)
        # onset step reads 0; during the rest of the pulse the counter
        # already points at the next onset
        assert seen == [7, 6, 5, 4, 3, 2, 1, 0, 9] + [8, 7, 6, 5, 4, 3, 2, 1, 0, 9, 8]


class TestDiscreteEnv:
    def make(self, seed=0, **kw):
        return FrostHollow(EnvConfig(**kw), rng(seed))

    def test_reset_state(self):
        env = self.make()
        obs = env.reset()
        assert obs.location == 3
        assert obs.heat == 0.0
        assert not obs.hazard_active
        assert env.time_to_onset == 8

    def test_observation_one_hot(self):
        env = self.make()
        obs = env.reset()
        assert sum(obs.location_one_hot) == 1
        assert obs.location_one_hot[3] == 1

    def test_conversion_at_capacity(self):
        env = self.make()
        env.heat = 5.5
        obs, reward, done = env.step(0)
        assert reward == 1
        assert obs.heat == 0.0

    def test_hazard_zeroes_heat_in_region(self):
        env = self.make()
        env.location = 2
        env.heat = 4.0
        env.schedule.inactive_remaining = 1  # next advance starts the pulse
        obs, reward, _ = env.step(0)
        assert obs.hazard_active
        assert obs.heat == 0.0 and reward == 0

    def test_chain_ends_safe_from_hazard(self):
        env = self.make()
        env.location = 0
        env.heat = 4.0
        env.schedule.inactive_remaining = 1
        obs, _, _ = env.step(-1)
        assert obs.hazard_active
        assert obs.heat == 4.0

    def test_heat_gain_region(self):
        gains = {}
        for loc in range(7):
            env = self.make()
            env.location = loc
            obs, _, _ = env.step(0)
            gains[loc] = obs.heat
        assert {loc for loc, h in gains.items() if h > 0} == {2, 3, 4}

    def test_movement_clamped(self):
        env = self.make()
        env.location = 0
        assert env.step(-1)[0].location == 0
        env.location = 6
        assert env.step(1)[0].location == 6

    def test_invalid_action(self):
        with pytest.raises(ValueError):
            self.make().step(2)

    def test_episode_length(self):
        env = self.make(episode_length=5)
        env.reset()
        flags = [env.step(0)[2] for _ in range(5)]
        assert flags == [False, False, False, False, True]

    def test_determinism(self):
        def trace(seed):
            env = FrostHollow(EnvConfig(hazard=HazardConfig(RandomIsi())),
                              rng(seed))
            env.reset()
            out = []
            for i in range(500):
                obs, r, _ = env.step(ACTIONS[i % 3])
                out.append((obs.location, obs.heat, obs.hazard_active, r))
            return out

        assert trace(7) == trace(7)


class TestRewardCeiling:
    """Exact dynamic program over (location, heat-level, cycle phase)."""

    def dp_max_reward(self, n_steps=1000):
        # phase p = steps taken mod 10; hazard active when p in {8, 9}
        n_loc, n_heat, n_phase = 7, 13, 10
        value = np.zeros((n_loc, n_heat, n_phase))
        for _ in range(n_steps):
            new = np.full_like(value, -np.inf)
            for loc in range(n_loc):
                for h in range(n_heat):
                    for p in range(n_phase):
                        best = -np.inf
                        for a in (-1, 0, 1):
                            loc2 = min(6, max(0, loc + a))
                            p2 = (p + 1) % 10
                            active = p2 in (8, 9)
                            h2, r = h, 0
                            if active and 1 <= loc2 <= 5:
                                h2 = 0
                            elif loc2 in (2, 3, 4):
                                h2 = h + 1
                            if h2 >= 12:
                                r, h2 = 1, 0
                            best = max(best, r + value[loc2, h2, p2])
                        new[loc, h, p] = best
            value = new
        return value[3, 0, 0]

    def test_maximum_reward_is_fifty(self):
        assert self.dp_max_reward() == 50.0

    def test_dp_policy_replays_to_fifty_in_env(self):
        # greedy one-step lookahead against the DP value function
        n_steps = 1000
        values = [np.zeros((7, 13, 10))]
        for _ in range(n_steps):
            prev = values[-1]
            new = np.zeros_like(prev)
            for loc in range(7):
                for h in range(13):
                    for p in range(10):
                        best = -np.inf
                        for a in (-1, 0, 1):
                            loc2 = min(6, max(0, loc + a))
                            p2 = (p + 1) % 10
                            h2, r = h, 0
                            if p2 in (8, 9) and 1 <= loc2 <= 5:
                                h2 = 0
                            elif loc2 in (2, 3, 4):
                                h2 = h + 1
                            if h2 >= 12:
                                r, h2 = 1, 0
                            best = max(best, r + prev[loc2, h2, p2])
                        new[loc, h, p] = best
            values.append(new)

        env = FrostHollow(EnvConfig(), rng())
        env.reset()
        total = 0
        loc, h, p = 3, 0, 0
        for t in range(n_steps):
            remaining = n_steps - t - 1
            best_a, best_v = None, -np.inf
            for a in (-1, 0, 1):
                loc2 = min(6, max(0, loc + a))
                p2 = (p + 1) % 10
                h2, r = h, 0
                if p2 in (8, 9) and 1 <= loc2 <= 5:
                    h2 = 0
                elif loc2 in (2, 3, 4):
                    h2 = h + 1
                if h2 >= 12:
                    r, h2 = 1, 0
                v = r + values[remaining][loc2, h2, p2]
                if v > best_v:
                    best_a, best_v = a, v
            obs, r, _ = env.step(best_a)
            p = (p + 1) % 10
            loc = obs.location
            h = round(obs.heat / 0.5)
            assert obs.hazard_active == (p in (8, 9))
            total += r
        assert total == 50


class TestContinuousEnv:
    def make(self, **kw):
        return ContinuousFrostHollow(ContinuousConfig(**kw), rng())

    def test_regions_by_radius(self):
        env = self.make()
        assert env.region(0.1) == "heat"
        assert env.region(0.5) == "hazard"
        assert env.region(1.2) == "safe"

    def test_heat_accrual_per_tick(self):
        env = self.make()
        obs, _, _ = env.step(0.0)
        assert obs.heat == pytest.approx(0.1875 * 0.05)

    def test_safe_beyond_hazard_radius(self):
        env = self.make()
        env.position = 1.2
        env.heat = 3.0
        env.schedule.inactive_remaining = 1
        obs, _, _ = env.step(0.0)
        assert obs.hazard_active
        assert obs.heat == 3.0

    def test_bank_converts_at_capacity_in_heat_region(self):
        env = self.make()
        env.heat = 5.0
        obs, reward, _ = env.step(0.0, bank=True)
        assert reward == 1
        assert obs.heat == 0.0

    def test_no_bank_no_conversion(self):
        env = self.make()
        env.heat = 5.0
        obs, reward, _ = env.step(0.0, bank=False)
        assert reward == 0
        assert obs.heat > 5.0

    def test_velocity_clamped_to_corridor(self):
        env = self.make()
        for _ in range(100):
            obs, _, _ = env.step(10.0)
        assert obs.position == 1.5

    def test_trial_length_in_ticks(self):
        env = self.make(trial_length=1.0, tick=0.05)
        done = False
        n = 0
        while not done:
            _, _, done = env.step(0.0)
            n += 1
        assert n == 20
