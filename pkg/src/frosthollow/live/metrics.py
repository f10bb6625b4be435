"""Behavioral metrics extracted from trial logs.

Both metrics read the per-tick records produced by ``Session``: wasted
steps measure over-caution (sheltering while no hazard is active), and
the minimum-useful-signal check asks whether the token rose early enough
before each hazard onset for a player to reach safety in time.
"""

from __future__ import annotations


def wasted_steps(records) -> dict:
    """Ticks spent outside the heat region while the hazard is inactive.

    Grouped by gap index: gap k covers the inactive stretch after the
    k-th hazard pulse ends (gap 0 precedes the first pulse).
    """
    total = 0
    per_gap = {0: 0}
    gap = 0
    prev_hazard = False
    for rec in records:
        if prev_hazard and not rec["hazard"]:
            gap += 1
            per_gap[gap] = 0
        prev_hazard = rec["hazard"]
        if not rec["hazard"] and rec["region"] != "heat":
            total += 1
            per_gap[gap] += 1
    return {"total": total, "per_gap": [per_gap[g] for g in sorted(per_gap)]}


def required_lead_seconds(exit_speed: float, heat_radius: float = 0.165,
                          hazard_radius: float = 1.0) -> float:
    """Seconds needed to cross from the heat-region edge to safety."""
    if exit_speed <= 0:
        raise ValueError(f"exit speed must be positive, got {exit_speed}")
    return (hazard_radius - heat_radius) / exit_speed


def minimum_useful_signal(records, exit_speed: float,
                          heat_radius: float = 0.165,
                          hazard_radius: float = 1.0) -> dict:
    """Per-pulse check that the token rose early enough before onset.

    For each hazard onset, the lead is measured from the last token
    rise (0 to 1 transition) since the previous pulse ended; a pulse
    with no token rise in its preceding gap gets no lead and is not
    useful.
    """
    required = required_lead_seconds(exit_speed, heat_radius, hazard_radius)
    pulses = []
    last_rise = None
    prev_token = 0
    prev_hazard = False
    for rec in records:
        if rec["token"] and not prev_token:
            last_rise = rec["t"]
        if rec["hazard"] and not prev_hazard:
            lead = None if last_rise is None else rec["t"] - last_rise
            pulses.append({
                "onset_t": rec["t"],
                "lead": lead,
                "useful": lead is not None and lead >= required,
            })
        if prev_hazard and not rec["hazard"]:
            last_rise = None  # leads measure rises within the current gap
        prev_token = rec["token"]
        prev_hazard = rec["hazard"]
    n_useful = sum(1 for p in pulses if p["useful"])
    return {
        "required_lead": required,
        "pulses": pulses,
        "fraction_useful": n_useful / len(pulses) if pulses else 0.0,
    }
