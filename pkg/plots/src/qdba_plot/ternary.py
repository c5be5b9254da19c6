"""Ternary heatmap: one colored point per Pauli mixture on the simplex."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import PlotError, load_rows, parse_float

_X_VERTEX = (0.0, 0.0)
_Y_VERTEX = (1.0, 0.0)
_Z_VERTEX = (0.5, math.sqrt(3.0) / 2.0)


def simplex_xy(px: float, py: float, pz: float, total: float) -> tuple[float, float]:
    """Barycentric projection onto the plotting triangle (X left, Y right,
    Z top); weights are the mixture probabilities normalized by their sum."""
    wx, wy, wz = px / total, py / total, pz / total
    x = wx * _X_VERTEX[0] + wy * _Y_VERTEX[0] + wz * _Z_VERTEX[0]
    y = wx * _X_VERTEX[1] + wy * _Y_VERTEX[1] + wz * _Z_VERTEX[1]
    return x, y


def ternary_points(rows: list[dict], metric: str) -> tuple[np.ndarray, np.ndarray]:
    """Validated (xy, values) arrays for the scatter; rejects off-simplex rows
    by CSV line number (all rows must share px+py+pz within 1e-9, entries
    nonnegative)."""
    mixtures = []
    values = []
    for offset, row in enumerate(rows):
        line = offset + 2  # header is line 1
        p = [parse_float(row, c, line) for c in ("px", "py", "pz")]
        mixtures.append((line, p))
        values.append(parse_float(row, metric, line))
    total = sum(mixtures[0][1])
    bad = [
        line
        for line, p in mixtures
        if min(p) < 0.0 or abs(sum(p) - total) > 1e-9
    ]
    if bad:
        raise PlotError(
            "off-simplex rows at line(s) " + ", ".join(str(b) for b in bad)
        )
    if total <= 0.0:
        raise PlotError("px+py+pz is zero; nothing to place on the simplex")
    xy = np.array([simplex_xy(*p, total) for _, p in mixtures])
    return xy, np.array(values)


def render_ternary(csv_path: str, metric: str, out_path: str, title: str = "") -> int:
    """Write the heatmap; returns the number of plotted points."""
    rows = load_rows(csv_path, ("px", "py", "pz", metric))
    xy, values = ternary_points(rows, metric)

    fig, ax = plt.subplots(figsize=(6.4, 5.8))
    triangle = np.array([_X_VERTEX, _Y_VERTEX, _Z_VERTEX, _X_VERTEX])
    ax.plot(triangle[:, 0], triangle[:, 1], color="black", linewidth=1.0)
    scatter = ax.scatter(
        xy[:, 0], xy[:, 1], c=values, cmap="viridis", s=90, edgecolors="none"
    )
    ax.annotate("px", _X_VERTEX, xytext=(-18, -14), textcoords="offset points")
    ax.annotate("py", _Y_VERTEX, xytext=(6, -14), textcoords="offset points")
    ax.annotate("pz", _Z_VERTEX, xytext=(-8, 10), textcoords="offset points")
    fig.colorbar(scatter, ax=ax, label=metric)
    ax.set_aspect("equal")
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return len(values)
