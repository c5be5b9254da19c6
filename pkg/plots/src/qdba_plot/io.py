"""CSV loading and column validation shared by both renderers.

Rows are kept as dictionaries of strings exactly as read; numeric parsing
happens per consumer so error messages can name the offending column and
CSV line (header is line 1, first data row line 2).
"""
from __future__ import annotations

import csv


class PlotError(ValueError):
    """Bad plotting input: missing columns, malformed values, empty data."""


def load_rows(csv_path: str, required: tuple[str, ...]) -> list[dict]:
    try:
        with open(csv_path, newline="") as fh:
            reader = csv.DictReader(fh)
            fields = reader.fieldnames or []
            missing = [c for c in required if c not in fields]
            if missing:
                raise PlotError(
                    f"{csv_path}: missing column(s) {', '.join(missing)}"
                )
            rows = list(reader)
    except OSError as exc:
        raise PlotError(f"cannot read {csv_path}: {exc}") from exc
    if not rows:
        raise PlotError(f"{csv_path}: no data rows")
    return rows


def parse_float(row: dict, column: str, line: int) -> float:
    raw = row.get(column, "")
    if raw == "" or raw is None:
        raise PlotError(f"line {line}: column '{column}' is empty")
    try:
        return float(raw)
    except ValueError as exc:
        raise PlotError(
            f"line {line}: column '{column}' value '{raw}' is not numeric"
        ) from exc
