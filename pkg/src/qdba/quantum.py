"""Exact density-matrix kernel for one- and two-qubit noise channels.

Every quantum object in the protocol is either a single qubit or one EPR
pair, so dense 2x2 / 4x4 complex arithmetic is exact and cheap; nothing
here approximates.  Qubit 0 is the most significant bit of a basis index,
i.e. |01> is row/column 1 and |10> is row/column 2 of a two-qubit matrix.

Channels are Kraus-operator sets applied by conjugation.  Single-qubit
operators are lifted to a two-qubit state with a kron against identity on
the untouched qubit.  Measurement is terminal and in the Z basis only:
the protocol never operates on a qubit after measuring it, so sampling a
basis index from the diagonal is the whole story.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

COMPLETENESS_ATOL = 1e-12


class ParameterError(ValueError):
    """A physical parameter is outside its valid range."""


class StateError(ValueError):
    """A matrix fails density-matrix validation, or a qubit index is bad."""


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Dense density matrix of one or two qubits."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def diagonal(self) -> np.ndarray:
        """Real Z-basis populations, in basis-index order."""
        return np.real(np.diag(self.matrix))

    def validate(self, atol: float = 1e-9) -> None:
        """Raise StateError unless Hermitian, unit trace and PSD within atol."""
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
            raise StateError(f"expected a 2x2 or 4x4 matrix, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=atol):
            raise StateError("matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > atol or abs(np.trace(m).imag) > atol:
            raise StateError(f"trace {np.trace(m)} != 1")
        eigs = np.linalg.eigvalsh(m)
        if eigs.min() < -atol:
            raise StateError(f"negative eigenvalue {eigs.min()}")


def _dyadic(signed_halves: list[list[float]]) -> DensityMatrix:
    # the canonical states all have exact dyadic entries; building them as
    # literals keeps their Z probabilities exact instead of off by one ulp
    return DensityMatrix(np.array(signed_halves, dtype=complex))


_STATES = {
    # (|01> + |10>)/sqrt(2): the distributed pair, Z-anticorrelated
    "psi_plus": _dyadic(
        [[0, 0, 0, 0], [0, 0.5, 0.5, 0], [0, 0.5, 0.5, 0], [0, 0, 0, 0]]
    ),
    # (|00> - |11>)/sqrt(2)
    "phi_minus": _dyadic(
        [[0.5, 0, 0, -0.5], [0, 0, 0, 0], [0, 0, 0, 0], [-0.5, 0, 0, 0.5]]
    ),
    # (|0> + |1>)/sqrt(2): filler qubit
    "plus": _dyadic([[0.5, 0.5], [0.5, 0.5]]),
    "zero": _dyadic([[1, 0], [0, 0]]),
}


def make_state(kind: str) -> DensityMatrix:
    """Return a named initial state: psi_plus, phi_minus, plus or zero."""
    try:
        return _STATES[kind]
    except KeyError:
        raise ParameterError(f"unknown state kind {kind!r}") from None


PSI_PLUS = make_state("psi_plus")
PLUS = make_state("plus")


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PauliParams:
    """Probabilities of I, X, Y, Z on a single qubit.  Must sum to 1."""

    p0: float
    px: float = 0.0
    py: float = 0.0
    pz: float = 0.0

    def __post_init__(self) -> None:
        probs = (self.p0, self.px, self.py, self.pz)
        for name, p in zip("p0 px py pz".split(), probs):
            if not 0.0 <= p <= 1.0:
                raise ParameterError(f"{name}={p} outside [0, 1]")
        if abs(sum(probs) - 1.0) > COMPLETENESS_ATOL:
            raise ParameterError(f"Pauli probabilities sum to {sum(probs)}, not 1")


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A CPTP map given by its Kraus operators (all 2x2)."""

    kind: str
    operators: tuple[np.ndarray, ...]

    def validate(self, atol: float = COMPLETENESS_ATOL) -> None:
        """Raise ParameterError unless sum_k K_k^dag K_k == I within atol."""
        acc = sum(K.conj().T @ K for K in self.operators)
        if not np.allclose(acc, np.eye(2), atol=atol):
            raise ParameterError(f"channel {self.kind!r} violates completeness")


_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _check_unit(name: str, gamma: float) -> None:
    if not 0.0 <= gamma <= 1.0:
        raise ParameterError(f"{name}={gamma} outside [0, 1]")


def identity_channel() -> KrausChannel:
    return KrausChannel("identity", (_I2.copy(),))


def pauli_channel(params: PauliParams) -> KrausChannel:
    """sqrt(p)-weighted Pauli operators; zero-probability terms are dropped."""
    ops = tuple(
        math.sqrt(p) * P
        for p, P in zip((params.p0, params.px, params.py, params.pz), (_I2, _X, _Y, _Z))
        if p > 0.0
    )
    return KrausChannel("pauli", ops)


def amplitude_damping(gamma: float) -> KrausChannel:
    """Relaxation toward |0>: |1> decays with probability gamma."""
    _check_unit("gamma", gamma)
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return KrausChannel("amplitude_damping", (k0, k1))


def dephasing(gamma: float) -> KrausChannel:
    """Phase loss: off-diagonals shrink by sqrt(1-gamma), populations untouched."""
    _check_unit("gamma", gamma)
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, 0.0], [0.0, math.sqrt(gamma)]], dtype=complex)
    return KrausChannel("dephasing", (k0, k1))


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """Channel applying `inner` first, then `outer` (operator product set)."""
    ops = tuple(B @ A for B in outer.operators for A in inner.operators)
    return KrausChannel("composite", ops)


def make_channel(kind: str, **params) -> KrausChannel:
    """Factory by name; kinds: identity, pauli, amplitude_damping, dephasing."""
    if kind == "identity":
        return identity_channel()
    if kind == "pauli":
        return pauli_channel(PauliParams(**params))
    if kind == "amplitude_damping":
        return amplitude_damping(**params)
    if kind == "dephasing":
        return dephasing(**params)
    raise ParameterError(f"unknown channel kind {kind!r}")


# ---------------------------------------------------------------------------
# physical parameter maps
# ---------------------------------------------------------------------------


def decoherence_params(t: float, t1: float, t2: float) -> tuple[float, float]:
    """Damping and dephasing strengths for a qubit idling/travelling for t.

    gamma1 = 1 - exp(-t/T1)
    gamma2 = 1 - exp(-t (2 T1 - T2) / (2 T1 T2))

    T2 may not exceed 2*T1 (or gamma2 would go negative, which is unphysical).
    """
    if t < 0:
        raise ParameterError(f"t={t} must be >= 0")
    if t1 <= 0 or t2 <= 0:
        raise ParameterError(f"T1={t1} and T2={t2} must be > 0")
    if t1 < t2 / 2:
        raise ParameterError(f"T1={t1} < T2/2={t2 / 2}: violates T1 >= T2/2")
    gamma1 = 1.0 - math.exp(-t / t1)
    gamma2 = 1.0 - math.exp(-t * (2.0 * t1 - t2) / (2.0 * t1 * t2))
    return gamma1, gamma2


def survival_probability(alpha_db_per_km: float, length_km: float) -> float:
    """Probability a photon survives a fiber: 10^(-alpha*L/10)."""
    if alpha_db_per_km < 0:
        raise ParameterError(f"alpha={alpha_db_per_km} must be >= 0")
    if length_km < 0:
        raise ParameterError(f"length={length_km} must be >= 0")
    return 10.0 ** (-alpha_db_per_km * length_km / 10.0)


# ---------------------------------------------------------------------------
# applying channels
# ---------------------------------------------------------------------------


@lru_cache(maxsize=512)
def _lifted(channel: KrausChannel, dim: int, target: int) -> tuple[np.ndarray, np.ndarray, bool]:
    # Stacked operators and their conjugates, lifted to `dim`, plus a flag
    # for all-diagonal Kraus sets (those provably preserve populations).
    if dim == 2:
        ops = np.stack(channel.operators)
    elif target == 0:
        ops = np.stack([np.kron(K, _I2) for K in channel.operators])
    else:
        ops = np.stack([np.kron(_I2, K) for K in channel.operators])
    off_diag = ops.copy()
    for k in range(off_diag.shape[0]):
        np.fill_diagonal(off_diag[k], 0.0)
    return ops, ops.conj(), not off_diag.any()


def apply_channel(state: DensityMatrix, channel: KrausChannel, target: int = 0) -> DensityMatrix:
    """Apply a single-qubit channel to qubit `target` of a 1- or 2-qubit state."""
    if target < 0 or target >= state.num_qubits:
        raise StateError(f"target qubit {target} out of range for {state.num_qubits} qubit(s)")
    ops, ops_conj, all_diagonal = _lifted(channel, state.dim, target)
    # sum_k K rho K^dag
    out = np.einsum("aij,jk,alk->il", ops, state.matrix, ops_conj)
    if all_diagonal:
        # populations are exactly invariant under diagonal Kraus sets; writing
        # them back removes the one-ulp drift of the squared operator weights
        np.fill_diagonal(out, state.matrix.diagonal())
    return DensityMatrix(out)


# ---------------------------------------------------------------------------
# measurement and loss
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MeasurementOutcome:
    """Z-basis result: bits[q] is qubit q's outcome; probability is the branch weight."""

    bits: tuple[int, ...]
    probability: float


def z_probabilities(state: DensityMatrix) -> np.ndarray:
    """Normalized Z-basis outcome distribution (diagonal, clipped at zero)."""
    p = np.clip(state.diagonal(), 0.0, None)
    total = p.sum()
    if total <= 0:
        raise StateError("state has no positive population")
    return p / total

def sample_index(probs, u: float) -> int:
    """Basis index for uniform draw u in [0,1); zero-probability rows unreachable."""
    acc = 0.0
    last = 0
    for i, p in enumerate(probs):
        if p > 0.0:
            acc += p
            last = i
            if u < acc:
                return i
    return last  # guards u landing on accumulated rounding slack


def measure_z_all(state: DensityMatrix, rng) -> MeasurementOutcome:
    """Measure every qubit in Z, consuming one uniform from rng."""
    probs = z_probabilities(state)
    idx = sample_index(probs.tolist(), rng.random())
    nq = state.num_qubits
    bits = tuple((idx >> (nq - 1 - q)) & 1 for q in range(nq))
    return MeasurementOutcome(bits, float(probs[idx]))


def lose_qubit(state: DensityMatrix, lost: int) -> DensityMatrix:
    """Trace out one qubit of a pair, leaving the partner's reduced state."""
    if state.num_qubits != 2:
        raise StateError("lose_qubit needs a two-qubit state")
    if lost not in (0, 1):
        raise StateError(f"lost qubit index {lost} invalid")
    m = state.matrix.reshape(2, 2, 2, 2)
    # indices: (q0 row, q1 row, q0 col, q1 col)
    reduced = np.trace(m, axis1=0, axis2=2) if lost == 0 else np.trace(m, axis1=1, axis2=3)
    return DensityMatrix(reduced)
