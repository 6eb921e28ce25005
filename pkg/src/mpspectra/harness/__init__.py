"""Experiment configuration, drivers, output and command-line interface."""

from .config import Experiment, ExperimentConfig, Reference, parse_config
from .emit import emit, load_json_result
from .results import (
    DiagnoseResult,
    NormcheckResult,
    ResidualResult,
    RunInfo,
    SweepResult,
    SweepRow,
    VarcheckResult,
)
from .runner import mp_eval, rate_fit, run_experiment, run_sweep

__all__ = [
    "DiagnoseResult",
    "Experiment",
    "ExperimentConfig",
    "NormcheckResult",
    "Reference",
    "ResidualResult",
    "RunInfo",
    "SweepResult",
    "SweepRow",
    "VarcheckResult",
    "emit",
    "load_json_result",
    "mp_eval",
    "parse_config",
    "rate_fit",
    "run_experiment",
    "run_sweep",
]
