"""Real-time session service for human-in-the-loop play."""

from .metrics import minimum_useful_signal, required_lead_seconds, wasted_steps
from .session import Session, SessionConfig, build_live_coagent, trial_plan

__all__ = [
    "Session",
    "SessionConfig",
    "build_live_coagent",
    "trial_plan",
    "wasted_steps",
    "minimum_useful_signal",
    "required_lead_seconds",
]
