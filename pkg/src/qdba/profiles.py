"""Hardware noise profiles and the star network they induce.

All qubits leave one distributor, so both halves of every pair (and every
filler) traverse hardware.  A profile decides what that transit does:

* logical      -- ideal links into the commander; an i.i.d. Pauli channel on
                  each lieutenant-bound qubit immediately before measurement
                  (arrival and measurement coincide, so a link hook is that).
* superconducting -- amplitude damping then dephasing on every transmitted
                  qubit, with strengths set by (transit, T1, T2).
* photonic     -- pure carrier loss from fiber attenuation, heralded (discard
                  and resend, costs only time) or unheralded (receiver records
                  bit 0, the partner decoheres to maximally mixed).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .des import LossRule, QuantumLink
from .quantum import (
    ParameterError,
    PauliParams,
    amplitude_damping,
    decoherence_params,
    dephasing,
    pauli_channel,
    survival_probability,
)

# Unheralded losses are recorded as this bit by the receiving node.
LOST_BIT = 0

# km/s in fiber; only moves the simulated clock, never a bit.
FIBER_SPEED_KM_S = 2.0e5


@dataclass(frozen=True)
class LogicalProfile:
    pauli: PauliParams


@dataclass(frozen=True)
class SuperconductingProfile:
    t1_s: float
    transit_s: float
    t2_s: Optional[float] = None  # defaults to T1
    gamma2_override: Optional[float] = None  # force the dephasing strength

    def __post_init__(self) -> None:
        if self.t1_s <= 0:
            raise ParameterError(f"T1={self.t1_s} must be > 0")
        if self.transit_s < 0:
            raise ParameterError(f"transit={self.transit_s} must be >= 0")
        t2 = self.t1_s if self.t2_s is None else self.t2_s
        if t2 <= 0 or self.t1_s < t2 / 2:
            raise ParameterError(f"T2={t2} must satisfy 0 < T2 <= 2*T1")
        if self.gamma2_override is not None and not 0.0 <= self.gamma2_override <= 1.0:
            raise ParameterError(f"gamma2_override={self.gamma2_override} outside [0, 1]")

    @property
    def effective_t2_s(self) -> float:
        return self.t1_s if self.t2_s is None else self.t2_s

    def gammas(self) -> tuple[float, float]:
        g1, g2 = decoherence_params(self.transit_s, self.t1_s, self.effective_t2_s)
        if self.gamma2_override is not None:
            g2 = self.gamma2_override
        return g1, g2


@dataclass(frozen=True)
class PhotonicProfile:
    length_km: float
    alpha_db_per_km: float = 0.02
    heralded: bool = False

    def __post_init__(self) -> None:
        if self.length_km < 0:
            raise ParameterError(f"length={self.length_km} must be >= 0")
        if self.alpha_db_per_km < 0:
            raise ParameterError(f"alpha={self.alpha_db_per_km} must be >= 0")

    @property
    def survival(self) -> float:
        return survival_probability(self.alpha_db_per_km, self.length_km)


HardwareProfile = Union[LogicalProfile, SuperconductingProfile, PhotonicProfile]


def noise_hooks_for(profile: HardwareProfile, side: str) -> tuple:
    """Hook list for one transmission; side is 'commander' or 'lieutenant'."""
    if side not in ("commander", "lieutenant"):
        raise ParameterError(f"side {side!r} invalid")
    if isinstance(profile, LogicalProfile):
        if side == "commander":
            return ()
        return (pauli_channel(profile.pauli),)
    if isinstance(profile, SuperconductingProfile):
        g1, g2 = profile.gammas()
        return (amplitude_damping(g1), dephasing(g2))
    if isinstance(profile, PhotonicProfile):
        return (LossRule(profile.survival),)
    raise ParameterError(f"unknown profile {profile!r}")


def link_delay(profile: HardwareProfile) -> float:
    if isinstance(profile, SuperconductingProfile):
        return profile.transit_s
    if isinstance(profile, PhotonicProfile):
        return profile.length_km / FIBER_SPEED_KM_S
    return 0.0


@dataclass(frozen=True)
class Network:
    """Distributor-to-everyone star; lieutenant_links[i] feeds lieutenant i."""

    profile: HardwareProfile
    commander_link: QuantumLink
    lieutenant_links: tuple[QuantumLink, ...]

    @property
    def heralded(self) -> bool:
        return isinstance(self.profile, PhotonicProfile) and self.profile.heralded


def build_network(profile: HardwareProfile, num_lieutenants: int) -> Network:
    if num_lieutenants < 2:
        raise ParameterError(f"need at least 2 lieutenants, got {num_lieutenants}")
    delay = link_delay(profile)
    loss_mode = "none"
    if isinstance(profile, PhotonicProfile):
        loss_mode = "heralded" if profile.heralded else "unheralded"
        if profile.heralded and profile.survival == 0.0:
            # re-emission on detected loss would never terminate
            raise ParameterError("heralded loss with zero survival cannot finish")
    commander = QuantumLink(
        endpoints=("distributor", "commander"),
        delay=delay,
        hooks=noise_hooks_for(profile, "commander"),
        loss_mode=loss_mode,
    )
    lt_hooks = noise_hooks_for(profile, "lieutenant")
    lieutenants = tuple(
        QuantumLink(
            endpoints=("distributor", f"lieutenant{i}"),
            delay=delay,
            hooks=lt_hooks,
            loss_mode=loss_mode,
        )
        for i in range(num_lieutenants)
    )
    return Network(profile, commander, lieutenants)
