"""Dependability model of task offloading to mobile edge computing."""

from ._core import (
    ConfigError,
    NumericError,
    UndefinedKpiError,
    default_params,
    exhaustive_scan,
    hyp2f1_coverage,
    kpis,
    optimize,
    osp,
    simulate_osp,
    steady_state,
)

__all__ = [
    "ConfigError",
    "NumericError",
    "UndefinedKpiError",
    "default_params",
    "exhaustive_scan",
    "hyp2f1_coverage",
    "kpis",
    "optimize",
    "osp",
    "simulate_osp",
    "steady_state",
]
