"""Aggregation of shot outcomes into per-sweep-point metric rows.

Error accounting: under a loyal commander a loyal lieutenant errs by
aborting or by settling on the wrong order, and the two modes are disjoint,
so lieutenant_error_rate is computed as abort_rate + wrong_value_rate to
keep the decomposition exact in float arithmetic.  Under a traitorous
commander the only error is failing to abort, so there wrong_value_rate
carries the whole error rate and abort_rate is reported as information.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..profiles import LogicalProfile, PhotonicProfile, SuperconductingProfile
from ..protocol import Decision, ShotOutcome
from .config import SweepPoint


class MetricsError(ValueError):
    """Raised when aggregation is asked for something meaningless."""


CSV_COLUMNS = (
    "profile",
    "n",
    "t",
    "m",
    "p0",
    "px",
    "py",
    "pz",
    "alpha_db_per_km",
    "length_km",
    "t1_s",
    "t2_s",
    "transit_s",
    "commander_loyal",
    "shots",
    "lieutenant_error_rate",
    "shot_error_rate",
    "abort_rate",
    "wrong_value_rate",
)


@dataclass(frozen=True)
class MetricsRow:
    """One CSV row; None fields render as empty cells."""

    profile: str
    n: int
    t: int
    m: int
    p0: Optional[float]
    px: Optional[float]
    py: Optional[float]
    pz: Optional[float]
    alpha_db_per_km: Optional[float]
    length_km: Optional[float]
    t1_s: Optional[float]
    t2_s: Optional[float]
    transit_s: Optional[float]
    commander_loyal: bool
    shots: int
    lieutenant_error_rate: float
    shot_error_rate: float
    abort_rate: float
    wrong_value_rate: float

    def as_strings(self) -> list[str]:
        out = []
        for name in CSV_COLUMNS:
            value = getattr(self, name)
            if value is None:
                out.append("")
            elif isinstance(value, bool):
                out.append("true" if value else "false")
            else:
                out.append(repr(value) if isinstance(value, float) else str(value))
        return out


def aggregate_metrics(point: SweepPoint, outcomes: Sequence[ShotOutcome]) -> MetricsRow:
    """Fold one sweep point's shots into a MetricsRow."""
    if not outcomes:
        raise MetricsError("no outcomes to aggregate")
    loyal_total = 0
    aborts = 0
    wrong = 0
    error_shots = 0
    for outcome in outcomes:
        shot_error = False
        for rec in outcome.records:
            if not rec.loyal:
                continue
            loyal_total += 1
            if rec.decision is Decision.ABORT:
                aborts += 1
            elif rec.error:
                wrong += 1
            if rec.error:
                shot_error = True
        if shot_error:
            error_shots += 1

    if loyal_total == 0:
        abort_rate = wrong_value_rate = error_rate = 0.0
    else:
        abort_rate = aborts / loyal_total
        wrong_value_rate = wrong / loyal_total
        if point.commander_loyal:
            # aborting is itself an error here, so the modes partition errors
            error_rate = abort_rate + wrong_value_rate
        else:
            error_rate = wrong_value_rate
    shot_error_rate = error_shots / len(outcomes)

    profile = point.profile
    p0 = px = py = pz = alpha = length = t1 = t2 = transit = None
    if isinstance(profile, LogicalProfile):
        name = "logical"
        p0, px, py, pz = (
            profile.pauli.p0,
            profile.pauli.px,
            profile.pauli.py,
            profile.pauli.pz,
        )
    elif isinstance(profile, SuperconductingProfile):
        name = "superconducting"
        t1 = profile.t1_s
        t2 = profile.effective_t2_s
        transit = profile.transit_s
    elif isinstance(profile, PhotonicProfile):
        name = "photonic"
        alpha = profile.alpha_db_per_km
        length = profile.length_km
    else:
        raise MetricsError(f"unknown profile type {type(profile).__name__}")

    return MetricsRow(
        profile=name,
        n=point.n,
        t=point.t,
        m=point.m,
        p0=p0,
        px=px,
        py=py,
        pz=pz,
        alpha_db_per_km=alpha,
        length_km=length,
        t1_s=t1,
        t2_s=t2,
        transit_s=transit,
        commander_loyal=point.commander_loyal,
        shots=len(outcomes),
        lieutenant_error_rate=error_rate,
        shot_error_rate=shot_error_rate,
        abort_rate=abort_rate,
        wrong_value_rate=wrong_value_rate,
    )
