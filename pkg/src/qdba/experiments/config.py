"""Flat key=value sweep configs and the Pauli ternary grid.

A config is line-oriented text: `key = value`, blank lines and `#` comments
ignored.  List-valued keys accept comma lists (`m = 16,48,112`) or inclusive
ranges (`m = 16:160:16`); every list key multiplies into the sweep, nested in
a fixed canonical order so runs are reproducible from the file alone.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Union

from ..profiles import (
    HardwareProfile,
    LogicalProfile,
    PhotonicProfile,
    SuperconductingProfile,
)
from ..protocol import CheckTolerances
from ..quantum import ParameterError, PauliParams


class ConfigError(ValueError):
    """Bad config text: unknown key, missing key, or invariant violation."""


MAX_VALIDATED_N = 11

# keys that may carry lists and sweep; everything else is a single value
_LIST_KEYS = ("n", "t", "m", "t1", "t2", "transit", "gamma2", "alpha", "length")
_SCALAR_KEYS = (
    "profile",
    "p0",
    "px",
    "py",
    "pz",
    "ternary_p0",
    "ternary_resolution",
    "runs",
    "shots",
    "seed",
    "theta",
    "epsilon",
    "classical_delay",
    "commander_loyal",
    "heralded",
    "out",
)
_KEYS_BY_PROFILE = {
    "logical": ("p0", "px", "py", "pz", "ternary_p0", "ternary_resolution"),
    "superconducting": ("t1", "t2", "transit", "gamma2"),
    "photonic": ("alpha", "length", "heralded"),
}


def ternary_grid(total: float, resolution: int) -> tuple[PauliParams, ...]:
    """All Pauli mixtures with px+py+pz = total on a simplex lattice.

    Lattice points (a,b,c), a+b+c = resolution, map to probabilities scaled
    by total/resolution; p0 = 1 - total throughout.  Count is
    (resolution+1)(resolution+2)/2, so resolution 13 gives 105 points.
    """
    if not 0.0 < total < 1.0:
        raise ParameterError(f"total={total} outside (0, 1)")
    if resolution < 1:
        raise ParameterError(f"resolution={resolution} must be >= 1")
    p0 = 1.0 - total
    unit = total / resolution
    points = []
    for a in range(resolution + 1):
        for b in range(resolution + 1 - a):
            c = resolution - a - b
            points.append(PauliParams(p0, a * unit, b * unit, c * unit))
    return tuple(points)


@dataclass(frozen=True)
class SweepPoint:
    """One fully resolved simulation setting."""

    profile: HardwareProfile
    n: int
    t: int
    m: int
    commander_loyal: bool
    tolerances: CheckTolerances
    classical_delay: float


@dataclass(frozen=True)
class SweepConfig:
    profile_kind: str
    n: tuple[int, ...]
    t: tuple[int, ...]
    m: tuple[int, ...]
    runs: int = 10
    shots: int = 30
    seed: int = 0
    commander_loyal: bool = True
    tolerances: CheckTolerances = field(default_factory=CheckTolerances)
    classical_delay: float = 0.0
    pauli: tuple[PauliParams, ...] = ()
    t1_s: tuple[float, ...] = ()
    t2_s: Optional[tuple[float, ...]] = None
    transit_s: tuple[float, ...] = (0.0,)
    gamma2: Optional[tuple[float, ...]] = None
    alpha_db_per_km: tuple[float, ...] = (0.02,)
    length_km: tuple[float, ...] = ()
    heralded: bool = False
    out: Optional[str] = None

    @property
    def shots_per_point(self) -> int:
        return self.runs * self.shots

    def _profiles(self) -> list[HardwareProfile]:
        if self.profile_kind == "logical":
            return [LogicalProfile(pauli=p) for p in self.pauli]
        if self.profile_kind == "superconducting":
            out: list[HardwareProfile] = []
            for t1 in self.t1_s:
                for t2 in self.t2_s if self.t2_s is not None else (t1,):
                    for tr in self.transit_s:
                        for g2 in self.gamma2 if self.gamma2 is not None else (None,):
                            out.append(
                                SuperconductingProfile(
                                    t1_s=t1, transit_s=tr, t2_s=t2, gamma2_override=g2
                                )
                            )
            return out
        out = []
        for alpha in self.alpha_db_per_km:
            for length in self.length_km:
                out.append(
                    PhotonicProfile(
                        length_km=length, alpha_db_per_km=alpha, heralded=self.heralded
                    )
                )
        return out

    def expand_points(self) -> list[SweepPoint]:
        """Cartesian sweep in canonical order: n, t, m, then profile fields."""
        try:
            profiles = self._profiles()
        except ParameterError as exc:
            raise ConfigError(str(exc)) from exc
        points = []
        for n in self.n:
            for t in self.t:
                if t >= n:
                    raise ConfigError(f"t={t} must be < n={n}")
                for m in self.m:
                    for prof in profiles:
                        points.append(
                            SweepPoint(
                                profile=prof,
                                n=n,
                                t=t,
                                m=m,
                                commander_loyal=self.commander_loyal,
                                tolerances=self.tolerances,
                                classical_delay=self.classical_delay,
                            )
                        )
        return points


def _scalar(token: str) -> Union[int, float, str]:
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        pass
    return token


def _parse_range(key: str, raw: str) -> list:
    parts = [p.strip() for p in raw.split(":")]
    if len(parts) != 3:
        raise ConfigError(f"{key}: range must be start:stop:step, got '{raw}'")
    vals = [_scalar(p) for p in parts]
    if any(isinstance(v, str) for v in vals):
        raise ConfigError(f"{key}: non-numeric range '{raw}'")
    start, stop, step = vals
    if step <= 0:
        raise ConfigError(f"{key}: range step must be positive, got {step}")
    if stop < start:
        raise ConfigError(f"{key}: range stop {stop} below start {start}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if all(isinstance(v, int) for v in vals):
        return [start + i * step for i in range(count)]
    return [float(start) + i * float(step) for i in range(count)]


def _parse_value(key: str, raw: str) -> Union[list, int, float, str]:
    raw = raw.strip()
    if not raw:
        raise ConfigError(f"{key}: empty value")
    if "," in raw:
        return [_scalar(p.strip()) for p in raw.split(",")]
    if ":" in raw:
        return _parse_range(key, raw)
    return _scalar(raw)


def _as_bool(key: str, value) -> bool:
    if isinstance(value, str) and value.lower() in ("true", "false", "yes", "no"):
        return value.lower() in ("true", "yes")
    if value in (0, 1):
        return bool(value)
    raise ConfigError(f"{key}: expected a boolean, got '{value}'")


def _as_int(key: str, value, minimum: Optional[int] = None) -> int:
    if not isinstance(value, int):
        raise ConfigError(f"{key}: expected an integer, got '{value}'")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{key}: {value} below minimum {minimum}")
    return value

def _as_float(key: str, value) -> float:
    if not isinstance(value, (int, float)):
        raise ConfigError(f"{key}: expected a number, got '{value}'")
    return float(value)


def _as_float_list(key: str, value) -> tuple[float, ...]:
    items = value if isinstance(value, list) else [value]
    return tuple(_as_float(key, v) for v in items)


def _as_int_list(key: str, value) -> tuple[int, ...]:
    items = value if isinstance(value, list) else [value]
    return tuple(_as_int(key, v) for v in items)


def parse_config(text: str) -> SweepConfig:
    """Parse and validate config text; raises ConfigError naming the field."""
    raw: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key=value, got '{stripped}'")
        key, _, value = stripped.partition("=")
        key = key.strip().lower()
        if key not in _LIST_KEYS and key not in _SCALAR_KEYS:
            raise ConfigError(f"unknown key '{key}'")
        if key in raw:
            raise ConfigError(f"duplicate key '{key}'")
        raw[key] = _parse_value(key, value)

    for key in ("profile", "n", "t", "m"):
        if key not in raw:
            raise ConfigError(f"missing key '{key}'")
    kind = raw.pop("profile")
    if kind not in _KEYS_BY_PROFILE:
        raise ConfigError(f"profile: '{kind}' not one of {sorted(_KEYS_BY_PROFILE)}")
    for other_kind, keys in _KEYS_BY_PROFILE.items():
        if other_kind == kind:
            continue
        for key in keys:
            if key in raw and key not in _KEYS_BY_PROFILE[kind]:
                raise ConfigError(f"key '{key}' not valid for profile '{kind}'")

    ns = _as_int_list("n", raw.pop("n"))
    ts = _as_int_list("t", raw.pop("t"))
    ms = _as_int_list("m", raw.pop("m"))
    for n in ns:
        if n < 3:
            raise ConfigError(f"n={n} must be >= 3")
        if n > MAX_VALIDATED_N:
            warnings.warn(f"n={n} beyond the validated range [3, {MAX_VALIDATED_N}]")
    for t in ts:
        if t < 0:
            raise ConfigError(f"t={t} must be >= 0")
    for m in ms:
        if m < 1:
            raise ConfigError(f"m={m} must be >= 1")

    runs = _as_int("runs", raw.pop("runs", 10), minimum=1)
    shots = _as_int("shots", raw.pop("shots", 30), minimum=1)
    seed = _as_int("seed", raw.pop("seed", 0), minimum=0)
    if seed >= 2**64:
        raise ConfigError(f"seed={seed} does not fit in 64 bits")
    try:
        tolerances = CheckTolerances(
            theta=_as_float("theta", raw.pop("theta", 0.25)),
            epsilon=_as_float("epsilon", raw.pop("epsilon", 0.0)),
        )
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc
    classical_delay = _as_float("classical_delay", raw.pop("classical_delay", 0.0))
    if classical_delay < 0:
        raise ConfigError(f"classical_delay={classical_delay} must be >= 0")
    commander_loyal = _as_bool("commander_loyal", raw.pop("commander_loyal", True))
    out = raw.pop("out", None)
    if out is not None and not isinstance(out, str):
        raise ConfigError(f"out: expected a path, got '{out}'")

    pauli: tuple[PauliParams, ...] = ()
    t1 = t2 = g2 = lengths = None
    transit: tuple[float, ...] = (0.0,)
    alpha: tuple[float, ...] = (0.02,)
    heralded = False
    if kind == "logical":
        if "ternary_p0" in raw:
            for key in ("p0", "px", "py", "pz"):
                if key in raw:
                    raise ConfigError(f"key '{key}' conflicts with ternary_p0")
            p0 = _as_float("ternary_p0", raw.pop("ternary_p0"))
            resolution = _as_int("ternary_resolution", raw.pop("ternary_resolution", 13), minimum=1)
            try:
                pauli = ternary_grid(1.0 - p0, resolution)
            except ParameterError as exc:
                raise ConfigError(str(exc)) from exc
        else:
            if "ternary_resolution" in raw:
                raise ConfigError("ternary_resolution requires ternary_p0")
            px = _as_float("px", raw.pop("px", 0.0))
            py = _as_float("py", raw.pop("py", 0.0))
            pz = _as_float("pz", raw.pop("pz", 0.0))
            p0 = _as_float("p0", raw.pop("p0", 1.0 - px - py - pz))
            try:
                pauli = (PauliParams(p0, px, py, pz),)
            except ParameterError as exc:
                raise ConfigError(str(exc)) from exc
    elif kind == "superconducting":
        if "t1" not in raw:
            raise ConfigError("missing key 't1' for profile 'superconducting'")
        t1 = _as_float_list("t1", raw.pop("t1"))
        t2 = _as_float_list("t2", raw.pop("t2")) if "t2" in raw else None
        transit = _as_float_list("transit", raw.pop("transit", 0.0))
        g2 = _as_float_list("gamma2", raw.pop("gamma2")) if "gamma2" in raw else None
    else:
        if "length" not in raw:
            raise ConfigError("missing key 'length' for profile 'photonic'")
        lengths = _as_float_list("length", raw.pop("length"))
        alpha = _as_float_list("alpha", raw.pop("alpha", 0.02))
        heralded = _as_bool("heralded", raw.pop("heralded", False))

    if raw:
        raise ConfigError(f"key '{sorted(raw)[0]}' not valid for profile '{kind}'")

    config = SweepConfig(
        profile_kind=kind,
        n=ns,
        t=ts,
        m=ms,
        runs=runs,
        shots=shots,
        seed=seed,
        commander_loyal=commander_loyal,
        tolerances=tolerances,
        classical_delay=classical_delay,
        pauli=pauli,
        t1_s=t1 or (),
        t2_s=t2,
        transit_s=transit,
        gamma2=g2,
        alpha_db_per_km=alpha,
        length_km=lengths or (),
        heralded=heralded,
        out=out,
    )
    config.expand_points()  # validate the full cartesian sweep up front
    return config
