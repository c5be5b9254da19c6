"""Sweep line plots: one curve per group value over a numeric x column."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import load_rows, parse_float

# columns spanning orders of magnitude read better on a log axis
LOG_X_COLUMNS = ("length_km", "transit_s")


def _group_key(raw: str):
    try:
        return (0, float(raw))
    except ValueError:
        return (1, raw)


def lines_series(
    rows: list[dict], x: str, metric: str, group: str | None
) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Sorted per-group (x, metric) arrays keyed by the group's cell text."""
    buckets: dict[str, list[tuple[float, float]]] = {}
    for offset, row in enumerate(rows):
        line = offset + 2
        key = row.get(group, "") if group else ""
        buckets.setdefault(key, []).append(
            (parse_float(row, x, line), parse_float(row, metric, line))
        )
    series = {}
    for key in sorted(buckets, key=_group_key):
        points = sorted(buckets[key])
        arr = np.array(points)
        series[key] = (arr[:, 0], arr[:, 1])
    return series


def render_lines(
    csv_path: str,
    x: str,
    metric: str,
    out_path: str,
    group: str | None = None,
    title: str = "",
) -> int:
    """Write the line plot; returns the number of plotted points."""
    required = (x, metric) + ((group,) if group else ())
    rows = load_rows(csv_path, required)
    series = lines_series(rows, x, metric, group)

    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    plotted = 0
    for key, (xs, ys) in series.items():
        label = f"{group}={key}" if group else None
        ax.plot(xs, ys, marker="o", label=label)
        plotted += len(xs)
    if x in LOG_X_COLUMNS:
        ax.set_xscale("log")
    ax.set_xlabel(x)
    ax.set_ylabel(metric)
    ax.grid(True, alpha=0.3)
    if group:
        ax.legend()
    if title:
        ax.set_title(title)
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return plotted
