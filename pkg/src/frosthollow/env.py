"""The Frost Hollow hazard-avoidance environment.

Discrete variant: a chain of seven locations.  The agent banks heat by
standing near the center and must retreat to the chain ends before the
periodic wind hazard blows, which zeroes any heat carried by an agent
caught in the middle.  Accumulated heat auto-converts to reward at
capacity.

Continuous variant: a 1-D corridor used for real-time human play, with
concentric heat/hazard/safe regions and an explicit bank action.

Hazard timing is driven by an inter-stimulus interval (ISI) that is
fixed, redrawn uniformly after each pulse, or drifting by one step
within bounds.  The ISI counts inactive steps between pulses; the pulse
itself lasts ``stimulus_length`` extra steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


# --------------------------------------------------------------------------
# Hazard scheduling


@dataclass(frozen=True)
class Fixed:
    isi: int = 8


@dataclass(frozen=True)
class RandomIsi:
    lo: int = 5
    hi: int = 10

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"random ISI bounds reversed: [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class Drift:
    start: int = 8
    delta: int = 1
    min: int = 6
    max: int = 11
    exclude_zero: bool = False  # draw from {-d, +d} instead of {-d, 0, +d}

    def __post_init__(self):
        if not (self.min <= self.start <= self.max):
            raise ValueError(f"drift start {self.start} outside [{self.min}, {self.max}]")


HazardCondition = Fixed | RandomIsi | Drift


@dataclass(frozen=True)
class HazardConfig:
    condition: HazardCondition = field(default_factory=Fixed)
    stimulus_length: int = 2


def initial_isi(cfg: HazardConfig, rng) -> int:
    cond = cfg.condition
    if isinstance(cond, Fixed):
        return cond.isi
    if isinstance(cond, RandomIsi):
        return int(rng.integers(cond.lo, cond.hi + 1))
    return cond.start


def next_isi(cfg: HazardConfig, current_isi: int, rng) -> int:
    """Draw the ISI for the next inter-hazard gap."""
    cond = cfg.condition
    if isinstance(cond, Fixed):
        return cond.isi
    if isinstance(cond, RandomIsi):
        return int(rng.integers(cond.lo, cond.hi + 1))
    if cond.exclude_zero:
        step = cond.delta if rng.integers(0, 2) else -cond.delta
    else:
        step = int(rng.integers(-cond.delta, cond.delta + 1))
    return int(min(cond.max, max(cond.min, current_isi + step)))


class HazardSchedule:
    """State machine emitting the hazard-active bit step by step."""

    def __init__(self, cfg: HazardConfig, rng):
        self.cfg = cfg
        self.rng = rng
        self.current_isi = initial_isi(cfg, rng)
        self.inactive_remaining = self.current_isi
        self.active_remaining = 0
        self.pending_isi = 0

    @property
    def active(self) -> bool:
        return self.active_remaining > 0

    @property
    def steps_until_onset(self) -> int:
        """Hidden steps until the hazard next becomes active (0 at onset)."""
        if not self.active:
            return self.inactive_remaining
        if self.active_remaining == self.cfg.stimulus_length:
            return 0
        return self.active_remaining + self.pending_isi

    def advance(self):
        if self.active_remaining > 0:
            self.active_remaining -= 1
            if self.active_remaining == 0:
                self.current_isi = self.pending_isi
                self.inactive_remaining = self.current_isi
        else:
            self.inactive_remaining -= 1
            if self.inactive_remaining == 0:
                self.active_remaining = self.cfg.stimulus_length
                self.pending_isi = next_isi(self.cfg, self.current_isi, self.rng)


# --------------------------------------------------------------------------
# Discrete chain environment


@dataclass(frozen=True)
class EnvConfig:
    n_locations: int = 7
    heat_rate: float = 0.5
    heat_capacity: float = 6.0
    episode_length: int = 1000
    hazard: HazardConfig = field(default_factory=HazardConfig)
    # Concentric regions on the chain: heat zone inside the hazard zone,
    # chain ends safe.  Three steps from center to safety sets the lead
    # time the signalling thresholds are tuned for.
    heat_locations: tuple = (2, 3, 4)

    @property
    def hazard_locations(self) -> range:
        return range(1, self.n_locations - 1)

    @property
    def start_location(self) -> int:
        return self.n_locations // 2


@dataclass(frozen=True)
class Observation:
    location_one_hot: tuple
    hazard_active: bool
    heat: float

    @property
    def location(self) -> int:
        return self.location_one_hot.index(1)


ACTIONS = (-1, 0, 1)


class FrostHollow:
    """Discrete Frost Hollow chain.  Single-owner mutable state."""

    def __init__(self, cfg: EnvConfig, rng):
        self.cfg = cfg
        self.rng = rng
        self.reset()

    def reset(self) -> Observation:
        self.location = self.cfg.start_location
        self.heat = 0.0
        self.schedule = HazardSchedule(self.cfg.hazard, self.rng)
        self.step_count = 0
        return self._observe()

    @property
    def hazard_active(self) -> bool:
        return self.schedule.active

    @property
    def time_to_onset(self) -> int:
        """Hidden information; exposed only to the oracle and metrics."""
        return self.schedule.steps_until_onset

    def _observe(self) -> Observation:
        one_hot = tuple(1 if i == self.location else 0 for i in range(self.cfg.n_locations))
        return Observation(one_hot, self.schedule.active, self.heat)

    def step(self, action: int):
        """Advance one step: move, hazard, heat gain, conversion.

        Returns (observation, reward, done).
        """
        if action not in ACTIONS:
            raise ValueError(f"invalid action {action}")
        self.location = min(self.cfg.n_locations - 1, max(0, self.location + action))
        self.schedule.advance()
        reward = 0
        if self.schedule.active and self.location in self.cfg.hazard_locations:
            self.heat = 0.0  # hit: zeroing wins over any heat gain
        elif self.location in self.cfg.heat_locations:
            self.heat += self.cfg.heat_rate
        if self.heat >= self.cfg.heat_capacity:
            reward = 1
            self.heat = 0.0
        self.step_count += 1
        done = self.step_count >= self.cfg.episode_length
        return self._observe(), reward, done


# --------------------------------------------------------------------------
# Continuous corridor environment


@dataclass(frozen=True)
class ContinuousConfig:
    tick: float = 0.05              # seconds of simulated time per step
    corridor_half_width: float = 1.5
    max_speed: float = 2.0          # m/s
    heat_radius: float = 0.165
    hazard_radius: float = 1.0
    heat_rate: float = 0.1875       # heat per second in the heat region
    heat_capacity: float = 5.0
    trial_length: float = 300.0     # seconds
    isi_seconds: float = 20.0
    stimulus_seconds: float = 4.0
    # Hazard condition with times in seconds; None means Fixed(isi_seconds).
    condition: HazardCondition | None = None

    def hazard_ticks(self) -> HazardConfig:
        """Hazard schedule with all times converted to integer ticks."""
        per = lambda s: max(1, round(s / self.tick))
        cond = self.condition if self.condition is not None else Fixed(self.isi_seconds)
        if isinstance(cond, Fixed):
            c = Fixed(per(cond.isi))
        elif isinstance(cond, RandomIsi):
            c = RandomIsi(per(cond.lo), per(cond.hi))
        else:
            c = Drift(per(cond.start), per(cond.delta), per(cond.min), per(cond.max),
                      cond.exclude_zero)
        return HazardConfig(c, per(self.stimulus_seconds))

    @property
    def total_ticks(self) -> int:
        return round(self.trial_length / self.tick)


@dataclass(frozen=True)
class ContinuousObservation:
    position: float
    hazard_active: bool
    heat: float


class ContinuousFrostHollow:
    """1-D corridor variant driven at a fixed tick for real-time play."""

    def __init__(self, cfg: ContinuousConfig, rng):
        self.cfg = cfg
        self.rng = rng
        self.reset()

    def reset(self) -> ContinuousObservation:
        self.position = 0.0
        self.heat = 0.0
        self.schedule = HazardSchedule(self.cfg.hazard_ticks(), self.rng)
        self.tick_count = 0
        return self._observe()

    @property
    def hazard_active(self) -> bool:
        return self.schedule.active

    @property
    def ticks_until_onset(self) -> int:
        return self.schedule.steps_until_onset

    def region(self, position=None) -> str:
        p = abs(self.position if position is None else position)
        if p <= self.cfg.heat_radius:
            return "heat"
        if p <= self.cfg.hazard_radius:
            return "hazard"
        return "safe"

    def _observe(self) -> ContinuousObservation:
        return ContinuousObservation(self.position, self.schedule.active, self.heat)

    def step(self, velocity: float, bank: bool = False):
        """Advance one tick; returns (observation, reward, done)."""
        cfg = self.cfg
        v = min(cfg.max_speed, max(-cfg.max_speed, velocity))
        self.position = min(cfg.corridor_half_width,
                            max(-cfg.corridor_half_width, self.position + v * cfg.tick))
        self.schedule.advance()
        region = self.region()
        reward = 0
        if self.schedule.active and region != "safe":
            self.heat = 0.0
        elif region == "heat":
            self.heat += cfg.heat_rate * cfg.tick
        if bank and region == "heat" and self.heat >= cfg.heat_capacity:
            reward = 1
            self.heat = 0.0
        self.tick_count += 1
        done = self.tick_count >= cfg.total_ticks
        return self._observe(), reward, done
