"""Deterministic network decomposition, hitting sets, spanners and distance oracles."""

__version__ = "0.1.0"
