"""Batch renderers for qdba metrics CSVs: ternary heatmaps and line plots."""

from .io import PlotError, load_rows
from .lines import lines_series, render_lines
from .ternary import render_ternary, simplex_xy, ternary_points

__version__ = "0.1.0"

__all__ = [
    "PlotError",
    "load_rows",
    "lines_series",
    "render_lines",
    "render_ternary",
    "simplex_xy",
    "ternary_points",
]
