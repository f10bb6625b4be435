"""Compiled inner loop for full agent/co-agent/environment runs.

A sweep touches hundreds of millions of environment steps, far beyond
what the plain-Python classes can cover on one core, so the harness runs
whole seeded runs through this numba kernel.  The kernel mirrors the
semantics of ``env``, ``coagent`` and ``control`` operation for
operation; ``tests/test_fastloop.py`` pins the two paths against each
other on a fully deterministic configuration.

Eligibility traces for the control learner are kept as a sparse active
set: with per-step decay gamma*lambda the trace magnitude drops below
any useful level within ~100 steps, so only recently visited state
action pairs are updated.  ``trace_cut=0.0`` disables the pruning for
exact-equivalence testing.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Co-agent kinds
CO_NONE = 0
CO_ORACLE = 1
CO_PAVLOVIAN = 2
# Temporal representations
REPR_BIAS = 0
REPR_BC = 1
REPR_TCT = 2
# GVF questions
Q_ACCUMULATION = 0
Q_COUNTDOWN = 1
# Hazard conditions
COND_FIXED = 0
COND_RANDOM = 1
COND_DRIFT = 2

N_ACTIONS = 3
N_HEAT = 13


@njit(cache=True)
def _next_isi(cond_type, p0, p1, p2, p3, exclude_zero, current):
    if cond_type == COND_FIXED:
        return p0
    if cond_type == COND_RANDOM:
        return np.random.randint(p0, p1 + 1)
    if exclude_zero:
        step = p1 if np.random.randint(0, 2) == 1 else -p1
    else:
        step = np.random.randint(-p1, p1 + 1)
    isi = current + step
    if isi < p2:
        isi = p2
    if isi > p3:
        isi = p3
    return isi


@njit(cache=True)
def _initial_isi(cond_type, p0, p1, p2, p3):
    if cond_type == COND_FIXED:
        return p0
    if cond_type == COND_RANDOM:
        return np.random.randint(p0, p1 + 1)
    return p0


@njit(cache=True)
def _temporal_index(repr_type, repr_n, repr_a, ssr):
    if repr_type == REPR_BIAS:
        return 0
    if repr_type == REPR_BC:
        if ssr < repr_n - 1:
            return ssr
        return repr_n - 1
    z = np.exp(-repr_a * ssr)
    idx = int(repr_n * (1.0 - z))
    if idx > repr_n - 1:
        idx = repr_n - 1
    return idx


@njit(cache=True)
def run_control(
    seed,
    n_episodes,
    episode_length,
    # environment
    n_locations,
    heat_rate,
    heat_capacity,
    heat_lo,
    heat_hi,
    cond_type,
    p0,
    p1,
    p2,
    p3,
    exclude_zero,
    stim_len,
    # co-agent
    co_kind,
    lead_steps,
    repr_type,
    repr_n,
    repr_a,
    q_type,
    q_gamma,
    gvf_alpha,
    gvf_lam,
    tau,
    rising,
    # control learner
    ctl_alpha,
    ctl_lam,
    ctl_gamma,
    eps,
    q_init,
    trace_cut,
):
    """One seeded run; returns (episode_rewards, q_table, gvf_weights).

    ``q_init`` is the full initial Q table (flattened states x 3); pass
    a constant array for the standard optimistic initialization.
    """
    np.random.seed(seed)

    n_states = 2 * 2 * n_locations * N_HEAT
    q = q_init.copy()
    e = np.zeros(n_states * N_ACTIONS)
    in_active = np.zeros(n_states * N_ACTIONS, dtype=np.bool_)
    active = np.empty(n_states * N_ACTIONS, dtype=np.int64)

    gvf_dim = 1 + repr_n
    gw = np.zeros(gvf_dim)
    ge = np.zeros(gvf_dim)

    rewards = np.zeros(n_episodes, dtype=np.int64)
    haz_lo = 1
    haz_hi = n_locations - 2
    ctl_decay = ctl_gamma * ctl_lam
    diverged = False

    for ep in range(n_episodes):
        # --- environment reset
        location = n_locations // 2
        heat = 0.0
        current_isi = _initial_isi(cond_type, p0, p1, p2, p3)
        inactive_rem = current_isi
        active_rem = 0
        pending_isi = 0
        # --- co-agent episode reset (weights persist)
        ssr = 0
        have_prev = False
        prev_p = False
        prev_tidx = 0
        for i in range(gvf_dim):
            ge[i] = 0.0
        # --- control trace reset
        n_active = 0
        for i in range(n_states * N_ACTIONS):
            e[i] = 0.0
            in_active[i] = False

        # initial token from the reset observation (hazard inactive)
        present = active_rem > 0
        token = 0
        if co_kind == CO_ORACLE:
            tto = inactive_rem if not present else 0
            if present or tto <= lead_steps:
                token = 1
        elif co_kind == CO_PAVLOVIAN:
            if present:
                ssr = 0
            else:
                ssr += 1
            tidx = _temporal_index(repr_type, repr_n, repr_a, ssr)
            # no previous features on the first step of an episode
            have_prev = True
            prev_p = present
            prev_tidx = tidx
            v = gw[1 + tidx]
            if present:
                v += gw[0]
            if rising:
                token = 1 if v > tau else 0
            else:
                token = 1 if v <= tau else 0

        hl = int(np.rint(heat / heat_rate))
        if hl > N_HEAT - 1:
            hl = N_HEAT - 1
        s = ((token * 2 + (1 if present else 0)) * n_locations + location) * N_HEAT + hl

        ep_reward = 0
        for t in range(episode_length):
            # --- action selection: epsilon-greedy, ties split uniformly
            explore = np.random.random() < eps
            if explore:
                ai = np.random.randint(0, N_ACTIONS)
            else:
                base = s * N_ACTIONS
                m = q[base]
                nt = 1
                for a in range(1, N_ACTIONS):
                    v = q[base + a]
                    if v > m:
                        m = v
                        nt = 1
                    elif v == m:
                        nt += 1
                if nt == 1:
                    ai = 0
                    for a in range(N_ACTIONS):
                        if q[base + a] == m:
                            ai = a
                            break
                else:
                    pick = np.random.randint(0, nt)
                    ai = 0
                    k = 0
                    for a in range(N_ACTIONS):
                        if q[base + a] == m:
                            if k == pick:
                                ai = a
                                break
                            k += 1

            # --- environment step: move, hazard, heat, conversion
            location += ai - 1
            if location < 0:
                location = 0
            if location > n_locations - 1:
                location = n_locations - 1
            if active_rem > 0:
                active_rem -= 1
                if active_rem == 0:
                    current_isi = pending_isi
                    inactive_rem = current_isi
            else:
                inactive_rem -= 1
                if inactive_rem == 0:
                    active_rem = stim_len
                    pending_isi = _next_isi(cond_type, p0, p1, p2, p3,
                                            exclude_zero, current_isi)
            hazard_active = active_rem > 0
            r = 0
            if hazard_active and haz_lo <= location <= haz_hi:
                heat = 0.0
            elif heat_lo <= location <= heat_hi:
                heat += heat_rate
            if heat >= heat_capacity:
                r = 1
                heat = 0.0

            # --- co-agent consumes the new hazard bit, emits a token
            present = hazard_active
            token = 0
            if co_kind == CO_ORACLE:
                if not hazard_active:
                    tto = inactive_rem
                elif active_rem == stim_len:
                    tto = 0
                else:
                    tto = active_rem + pending_isi
                if present or tto <= lead_steps:
                    token = 1
            elif co_kind == CO_PAVLOVIAN:
                if present:
                    ssr = 0
                else:
                    ssr += 1
                tidx = _temporal_index(repr_type, repr_n, repr_a, ssr)
                if q_type == Q_ACCUMULATION:
                    c_next = 1.0 if present else 0.0
                    g_next = q_gamma
                else:
                    c_next = 1.0
                    g_next = 0.0 if present else 1.0
                if have_prev:
                    if prev_p:
                        ge[0] += 1.0
                    ge[1 + prev_tidx] += 1.0
                    v_t = gw[1 + prev_tidx]
                    if prev_p:
                        v_t += gw[0]
                    v_n = gw[1 + tidx]
                    if present:
                        v_n += gw[0]
                    delta = c_next + g_next * v_n - v_t
                    if not np.isfinite(delta):
                        diverged = True
                        break
                    for i in range(gvf_dim):
                        gw[i] += gvf_alpha * delta * ge[i]
                    gdecay = g_next * gvf_lam
                    for i in range(gvf_dim):
                        ge[i] *= gdecay
                have_prev = True
                prev_p = present
                prev_tidx = tidx
                v = gw[1 + tidx]
                if present:
                    v += gw[0]
                if rising:
                    token = 1 if v > tau else 0
                else:
                    token = 1 if v <= tau else 0

            hl = int(np.rint(heat / heat_rate))
            if hl > N_HEAT - 1:
                hl = N_HEAT - 1
            s_next = ((token * 2 + (1 if present else 0)) * n_locations
                      + location) * N_HEAT + hl
            terminal = t == episode_length - 1

            # --- Expected Sarsa(lambda) update
            flat = s * N_ACTIONS + ai
            e[flat] += 1.0
            if not in_active[flat]:
                in_active[flat] = True
                active[n_active] = flat
                n_active += 1
            if terminal:
                expected = 0.0
            else:
                base = s_next * N_ACTIONS
                m = q[base]
                nt = 1
                for a in range(1, N_ACTIONS):
                    v = q[base + a]
                    if v > m:
                        m = v
                        nt = 1
                    elif v == m:
                        nt += 1
                expected = 0.0
                for a in range(N_ACTIONS):
                    p = eps / N_ACTIONS
                    if q[base + a] == m:
                        p += (1.0 - eps) / nt
                    expected += p * q[base + a]
            delta = r + ctl_gamma * expected - q[flat]
            if not np.isfinite(delta):
                diverged = True
                break
            i = 0
            while i < n_active:
                f = active[i]
                q[f] += ctl_alpha * delta * e[f]
                e[f] *= ctl_decay
                if e[f] <= trace_cut:
                    e[f] = 0.0
                    in_active[f] = False
                    n_active -= 1
                    active[i] = active[n_active]
                else:
                    i += 1

            s = s_next
            ep_reward += r
        if diverged:
            rewards[ep:] = -1
            break
        rewards[ep] = ep_reward

    return rewards, q, gw
