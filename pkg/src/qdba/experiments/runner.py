"""Ensemble execution over sweep points and deterministic output emission.

Every shot draws from RngStream(seed, (run, shot)); the stream never sees
the sweep point, so points share shot-level randomness (common random
numbers) and any worker can replay any shot bit-for-bit.  Tasks are one
(point, run) batch each and results are folded in task order, which makes
the output a pure function of (config, seed) regardless of worker count.
"""
from __future__ import annotations

import csv
import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

from .. import __version__
from ..des import RngStream
from ..profiles import build_network
from ..protocol import ShotOutcome, ShotSpec, run_shot
from .config import SweepConfig, SweepPoint
from .metrics import CSV_COLUMNS, MetricsRow, aggregate_metrics

SHOT_COLUMNS = (
    "point",
    "run",
    "shot",
    "lieutenant",
    "loyal",
    "order_sent",
    "decision",
    "error",
)


def _run_batch(args: tuple) -> list[ShotOutcome]:
    """One (point, run) batch; module-level so worker processes can import it."""
    point, seed, run, shots = args
    network = build_network(point.profile, point.n - 1)
    spec = ShotSpec(
        n=point.n,
        m=point.m,
        t=point.t,
        commander_loyal=point.commander_loyal,
        tolerances=point.tolerances,
        classical_delay=point.classical_delay,
    )
    out = []
    for shot in range(shots):
        stream = RngStream(seed, (run, shot))
        out.append(run_shot(spec, network, stream))
    return out


def run_ensemble(
    config: SweepConfig, workers: int = 1, collect_shots: bool = False
) -> tuple[list[MetricsRow], Optional[list[tuple]]]:
    """Run every sweep point; returns metric rows and, on request, shot rows."""
    if workers < 1:
        raise ValueError(f"workers={workers} must be >= 1")
    points = config.expand_points()
    tasks = [
        (point, config.seed, run, config.shots)
        for point in points
        for run in range(config.runs)
    ]

    rows: list[MetricsRow] = []
    shot_rows: Optional[list[tuple]] = [] if collect_shots else None
    pending: list[ShotOutcome] = []
    point_index = 0

    def fold(task: tuple, batch: list[ShotOutcome]) -> None:
        nonlocal point_index
        point, _, run, _ = task
        pending.extend(batch)
        if shot_rows is not None:
            for shot, outcome in enumerate(batch):
                for rec in outcome.records:
                    shot_rows.append(
                        (
                            point_index,
                            run,
                            shot,
                            rec.lieutenant,
                            rec.loyal,
                            rec.order_sent,
                            rec.decision.value,
                            rec.error,
                        )
                    )
        if run == config.runs - 1:
            rows.append(aggregate_metrics(point, pending))
            pending.clear()
            point_index += 1

    if workers == 1:
        for task in tasks:
            fold(task, _run_batch(task))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for task, batch in zip(tasks, pool.map(_run_batch, tasks)):
                fold(task, batch)
    return rows, shot_rows


def _config_manifest(config: SweepConfig) -> dict:
    blob = dataclasses.asdict(config)
    blob["pauli"] = [dataclasses.asdict(p) for p in config.pauli]
    return blob


def write_outputs(
    rows: list[MetricsRow],
    out_dir: str,
    config: SweepConfig,
    shot_rows: Optional[list[tuple]] = None,
) -> Path:
    """Write metrics.csv, manifest.json and optionally shots.csv under out_dir."""
    if not rows:
        raise ValueError("no metric rows to write")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "metrics.csv", "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for row in rows:
                writer.writerow(row.as_strings())
        manifest = {
            "config": _config_manifest(config),
            "seed": config.seed,
            "version": __version__,
        }
        with open(out / "manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
        if shot_rows is not None:
            with open(out / "shots.csv", "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(SHOT_COLUMNS)
                for row in shot_rows:
                    writer.writerow(
                        [
                            "true" if v is True else "false" if v is False else v
                            for v in row
                        ]
                    )
    except OSError as exc:
        raise OSError(f"writing outputs under {out}: {exc}") from exc
    return out
