"""Sweeps comparing arithmetic data with the matrix-model predictions."""

from .battery import (BatteryResult, SearchExhaustedError, is_matched, matched_tuple,
                      monsky_invariance_battery)
from .gates import GateNotPassedError, require_gate, run_gates
from .jutila import JutilaRow, jutila_probe, jutila_table
from .reports import DistributionReport, SweepConfig, default_cache_dir, tv_distance
from .sweeps import class_sweep, predicted_class, predicted_selmer, selmer_sweep

__all__ = [
    "BatteryResult", "SearchExhaustedError", "is_matched", "matched_tuple",
    "monsky_invariance_battery", "GateNotPassedError", "require_gate", "run_gates",
    "JutilaRow", "jutila_probe", "jutila_table", "DistributionReport", "SweepConfig",
    "default_cache_dir", "tv_distance", "class_sweep", "predicted_class",
    "predicted_selmer", "selmer_sweep",
]
