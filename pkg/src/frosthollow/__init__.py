"""Frost Hollow: Pavlovian-signalling co-agents and control learning."""

__version__ = "0.1.0"
