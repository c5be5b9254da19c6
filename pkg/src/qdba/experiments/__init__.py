"""Sweep configs, ensemble execution, metric aggregation and CSV emission."""

from .config import ConfigError, SweepConfig, SweepPoint, parse_config, ternary_grid
from .metrics import CSV_COLUMNS, MetricsError, MetricsRow, aggregate_metrics
from .runner import run_ensemble, write_outputs

__all__ = [
    "CSV_COLUMNS",
    "ConfigError",
    "MetricsError",
    "MetricsRow",
    "SweepConfig",
    "SweepPoint",
    "aggregate_metrics",
    "parse_config",
    "run_ensemble",
    "ternary_grid",
    "write_outputs",
]
