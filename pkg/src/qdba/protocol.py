"""Three-round detectable agreement over distributed EPR-pair correlations.

Setup.  One commander plus n-1 lieutenants share m*(n-1) anticorrelated
pairs: the commander holds one half of every pair, lieutenant i holds the
partner halves at record indices i + (n-1)k for k in [0, m) and a |+>
filler qubit everywhere else, so every node's Z-measurement record has
length m*(n-1).  The commander's bit at lieutenant i's live index is the
logical complement of i's bit there; filler bits are fair coins.

Command vectors.  To order c, the commander reveals, per lieutenant, the
tuples whose bit at that lieutenant's own index equals c, masking the
rest.  A revealed tuple exposes all n-1 commander bits of the tuple, which
is what lets third parties cross-check a relayed vector against their own
anticorrelated bits.  Forging a vector for the opposite order means
guessing the verifier's bits at ~m/2 indices, so forgeries die at rate
2^-r.

Rounds.  Round 1: each lieutenant claims the decoded order if its own
vector checks out, else 'abort', attaching its vector (and, when claiming
abort, its full bit record).  Round 2: a lieutenant holding a valid order
aborts if any peer proves the opposite order; one holding nothing adopts
the peers' claim if they are unanimous and all proofs validate.  Round 3:
a committed lieutenant aborts if an aborting peer relays two validated
contradicting vectors, or any peer proved an order different from the
round-1 claim.  A claimed order only counts as proven when the attached
vector decodes to that same order and passes the consistency check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .des import Arrival, EventQueue, RngStream, run_until_idle, transmit_qubit
from .profiles import LOST_BIT, Network
from .quantum import PLUS, PSI_PLUS, ParameterError, sample_index, z_probabilities

MASKED = -1


class ProtocolDesyncError(RuntimeError):
    """A classical round was processed out of order or with a missing message."""


# ---------------------------------------------------------------------------
# index scheme and command vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexScheme:
    """Maps (lieutenant, tuple) to positions in the shared record."""

    n: int  # players including the commander
    m: int  # pair tuples per lieutenant

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ParameterError(f"n={self.n} must be >= 3")
        if self.m < 1:
            raise ParameterError(f"m={self.m} must be >= 1")

    @property
    def num_lieutenants(self) -> int:
        return self.n - 1

    @property
    def record_length(self) -> int:
        return self.m * (self.n - 1)

    def anticorrelated_index(self, i: int, k: int) -> int:
        """Record index of lieutenant i's own (anticorrelated) slot in tuple k."""
        if not 0 <= i < self.n - 1:
            raise ParameterError(f"lieutenant {i} out of range [0, {self.n - 1})")
        if not 0 <= k < self.m:
            raise ParameterError(f"tuple {k} out of range [0, {self.m})")
        return i + (self.n - 1) * k


def anticorrelated_index(scheme: IndexScheme, i: int, k: int) -> int:
    return scheme.anticorrelated_index(i, k)


@dataclass(frozen=True, eq=False)
class CommandVector:
    """Commander's record with tuple-granular masking, addressed to `target`."""

    order: int
    target: int
    entries: np.ndarray  # int8, MASKED where hidden

    def __post_init__(self) -> None:
        if self.order not in (0, 1):
            raise ParameterError(f"order {self.order} not a bit")


def build_command_vector(scheme: IndexScheme, a: np.ndarray, i: int, c: int) -> CommandVector:
    """Mask the commander record `a` for lieutenant i and order c.

    Tuple k is revealed iff a[anticorrelated_index(i, k)] == c, so at every
    revealed own-slot the lieutenant expects its measured bit to be 1 - c.
    """
    if c not in (0, 1):
        raise ParameterError(f"order {c} not a bit")
    if not 0 <= i < scheme.num_lieutenants:
        raise ParameterError(f"lieutenant {i} out of range")
    if len(a) != scheme.record_length:
        raise ParameterError(f"record length {len(a)} != {scheme.record_length}")
    tuples = np.asarray(a, dtype=np.int8).reshape(scheme.m, scheme.n - 1)
    revealed = tuples[:, i] == c
    entries = np.where(revealed[:, None], tuples, np.int8(MASKED)).reshape(-1)
    return CommandVector(order=c, target=i, entries=entries)


def decode_order(v: CommandVector) -> int:
    return v.order


@dataclass(frozen=True)
class CheckTolerances:
    """theta widens the revealed-count window; epsilon allows a mismatch fraction."""

    theta: float = 0.25
    epsilon: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= 0.5:
            raise ParameterError(f"theta={self.theta} outside [0, 0.5]")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ParameterError(f"epsilon={self.epsilon} outside [0, 1]")


def _revealed(scheme: IndexScheme, v: CommandVector, slot: int) -> np.ndarray:
    return v.entries.reshape(scheme.m, scheme.n - 1)[:, slot] != MASKED


def _count_in_window(r: int, m: int, theta: float) -> bool:
    return abs(r - m / 2.0) <= theta * m


def revealed_count(scheme: IndexScheme, v: CommandVector, slot: int) -> int:
    return int(_revealed(scheme, v, slot).sum())


def check_alice(
    scheme: IndexScheme, i: int, l_i: np.ndarray, v: CommandVector, tol: CheckTolerances
) -> bool:
    """Accept the commander's vector: plausible reveal count, self-consistent
    mask, and own bits anticorrelated at every revealed own-slot (up to epsilon)."""
    entries = v.entries.reshape(scheme.m, scheme.n - 1)
    rev = entries[:, i] != MASKED
    r = int(rev.sum())
    if not _count_in_window(r, scheme.m, tol.theta):
        return False
    if r == 0:
        return True
    order = v.order
    if not (entries[rev, i] == order).all():
        return False
    own = l_i.reshape(scheme.m, scheme.n - 1)[rev, i]
    mismatches = int((own != 1 - order).sum())
    return mismatches <= tol.epsilon * r


def check_lt_cv(
    scheme: IndexScheme,
    i: int,
    l_i: np.ndarray,
    j: int,
    v_j: CommandVector,
    tol: CheckTolerances,
) -> bool:
    """Validate a vector addressed to lieutenant j against i's own record.

    The reveal mask is keyed on j's slots; the cross-check reads the exposed
    commander bits at i's slots, which must anticorrelate with i's bits.
    """
    entries = v_j.entries.reshape(scheme.m, scheme.n - 1)
    rev = entries[:, j] != MASKED
    r = int(rev.sum())
    if not _count_in_window(r, scheme.m, tol.theta):
        return False
    if r == 0:
        return True
    if not (entries[rev, j] == v_j.order).all():
        return False
    cross = entries[rev, i]
    own = l_i.reshape(scheme.m, scheme.n - 1)[rev, i]
    mismatches = int((cross != 1 - own).sum())
    return mismatches <= tol.epsilon * r


def check_lt_bv(
    scheme: IndexScheme,
    i: int,
    v_own: CommandVector,
    j: int,
    l_j: np.ndarray,
    tol: CheckTolerances,
) -> bool:
    """Validate j's claimed bit record against i's accepted vector.

    Over the tuples revealed in v_own, j's claimed bits at its own slots must
    anticorrelate with the exposed commander bits there.  With nothing
    revealed the check is vacuously true (callers flag that case).
    """
    entries = v_own.entries.reshape(scheme.m, scheme.n - 1)
    rev = entries[:, i] != MASKED
    r = int(rev.sum())
    if r == 0:
        return True
    cross = entries[rev, j]
    claimed = l_j.reshape(scheme.m, scheme.n - 1)[rev, j]
    mismatches = int((claimed != 1 - cross).sum())
    return mismatches <= tol.epsilon * r


def contradicts(v1: CommandVector, v2: CommandVector) -> bool:
    """Two vectors clash if their orders differ or any index revealed in both
    carries different bits."""
    if v1.order != v2.order:
        return True
    e1, e2 = v1.entries, v2.entries
    overlap = (e1 != MASKED) & (e2 != MASKED)
    return bool((e1[overlap] != e2[overlap]).any())


# ---------------------------------------------------------------------------
# round messages and the lieutenant state machine
# ---------------------------------------------------------------------------


class Decision(Enum):
    ZERO = 0
    ONE = 1
    ABORT = "abort"

    @classmethod
    def from_claim(cls, claim: Optional[int]) -> "Decision":
        return cls.ABORT if claim is None else cls(claim)


@dataclass(frozen=True, eq=False)
class RoundMessage:
    """Broadcast payload; claim None means 'abort'.

    Round 1 carries exactly the sender's own command vector, plus its bit
    record iff it claims abort.  Round 2 carries the proof set justifying
    the sender's decision.
    """

    sender: int
    round: int
    claim: Optional[int]
    proofs: tuple[CommandVector, ...]
    bits: Optional[np.ndarray] = None


@dataclass
class LieutenantState:
    scheme: IndexScheme
    i: int
    bits: np.ndarray
    vector: Optional[CommandVector] = None
    tol: CheckTolerances = field(default_factory=CheckTolerances)
    d1: Optional[int] = None
    d2: Optional[int] = None
    round1_inbox: Optional[dict] = None
    rounds_done: int = 0
    vacuous_bv_checks: int = 0
    _cv_cache: dict = field(default_factory=dict)

    def _cv_ok(self, v: CommandVector) -> bool:
        key = id(v)
        hit = self._cv_cache.get(key)
        if hit is None:
            hit = check_lt_cv(self.scheme, self.i, self.bits, v.target, v, self.tol)
            self._cv_cache[key] = hit
        return hit

    def _claim_proven(self, msg: RoundMessage) -> bool:
        # A 0/1 claim counts only with a vector addressed to the claimant that
        # decodes to the claimed order and validates; a traitor relabeling its
        # genuine vector therefore proves nothing.
        if msg.claim is None or not msg.proofs:
            return False
        v = msg.proofs[0]
        return v.target == msg.sender and decode_order(v) == msg.claim and self._cv_ok(v)


def lieutenant_step(
    state: LieutenantState, round_index: int, inbox: Optional[dict]
) -> tuple[Optional[int], Optional[RoundMessage]]:
    """Advance one loyal lieutenant a round; returns (decision, outbox).

    Round 1 ignores inbox; rounds 2 and 3 need the previous round's message
    from every peer, keyed by sender.  Rounds must run in order.
    """
    if round_index != state.rounds_done + 1:
        raise ProtocolDesyncError(
            f"lieutenant {state.i}: round {round_index} after {state.rounds_done}"
        )
    state.rounds_done = round_index

    if round_index == 1:
        if state.vector is None:
            raise ProtocolDesyncError(f"lieutenant {state.i} has no command vector")
        ok = check_alice(state.scheme, state.i, state.bits, state.vector, state.tol)
        state.d1 = decode_order(state.vector) if ok else None
        out = RoundMessage(
            sender=state.i,
            round=1,
            claim=state.d1,
            proofs=(state.vector,),
            bits=state.bits if state.d1 is None else None,
        )
        return state.d1, out

    if inbox is None or len(inbox) != state.scheme.num_lieutenants - 1:
        raise ProtocolDesyncError(
            f"lieutenant {state.i}: round {round_index} inbox incomplete"
        )

    if round_index == 2:
        state.round1_inbox = inbox
        d2 = state.d1
        if state.d1 is not None:
            opposite = 1 - state.d1
            for msg in inbox.values():
                if msg.claim == opposite and state._claim_proven(msg):
                    d2 = None
                    break
        else:
            claims = {msg.claim for msg in inbox.values()}
            if len(claims) == 1:
                x = next(iter(claims))
                if x is None:
                    ok = True
                    for msg in inbox.values():
                        if msg.bits is None:
                            ok = False
                            break
                        if revealed_count(state.scheme, state.vector, state.i) == 0:
                            state.vacuous_bv_checks += 1
                        if not check_lt_bv(
                            state.scheme, state.i, state.vector, msg.sender, msg.bits, state.tol
                        ):
                            ok = False
                            break
                else:
                    ok = all(state._claim_proven(msg) for msg in inbox.values())
                if ok:
                    d2 = x
        state.d2 = d2
        proofs = [state.vector]
        for j in sorted(inbox):
            v = inbox[j].proofs[0]
            if state._cv_ok(v):
                proofs.append(v)
        out = RoundMessage(sender=state.i, round=2, claim=d2, proofs=tuple(proofs))
        return d2, out

    if round_index == 3:
        d3 = state.d2
        if d3 is not None:
            for j in sorted(inbox):
                msg = inbox[j]
                # A peer that claimed abort in either round is a presenter:
                # even after recovering via unanimity it relays the validated
                # vectors it collected, and a contradicting pair among them
                # can only originate from a double-dealing commander.
                if msg.claim is not None and state.round1_inbox[j].claim is not None:
                    continue
                valid = [v for v in msg.proofs if state._cv_ok(v)]
                stop = False
                for x in range(len(valid)):
                    for y in range(x + 1, len(valid)):
                        if contradicts(valid[x], valid[y]):
                            stop = True
                            break
                    if stop:
                        break
                if stop:
                    d3 = None
                    break
        if d3 is not None:
            for j in sorted(state.round1_inbox):
                msg = state.round1_inbox[j]
                if msg.claim is not None and msg.claim != state.d1 and state._claim_proven(msg):
                    d3 = None
                    break
        return d3, None

    raise ProtocolDesyncError(f"round {round_index} out of range")


# ---------------------------------------------------------------------------
# one full shot, driven through the event queue
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShotSpec:
    n: int
    m: int
    t: int
    commander_loyal: bool = True
    tolerances: CheckTolerances = field(default_factory=CheckTolerances)
    traitor_ids: Optional[tuple[int, ...]] = None
    classical_delay: float = 0.0

    def __post_init__(self) -> None:
        if self.t < 0 or self.t >= self.n:
            raise ParameterError(f"t={self.t} must satisfy 0 <= t < n={self.n}")
        if self.traitor_ids is not None:
            ids = self.traitor_ids
            if len(ids) != self.t or len(set(ids)) != self.t:
                raise ParameterError(f"traitor_ids {ids} must be {self.t} distinct ids")
            if any(not 0 <= x < self.n - 1 for x in ids):
                raise ParameterError(f"traitor_ids {ids} out of range")


@dataclass(frozen=True)
class LieutenantRecord:
    lieutenant: int
    loyal: bool
    order_sent: int
    decision: Decision
    error: bool


@dataclass(frozen=True)
class ShotOutcome:
    rng_path: tuple[int, ...]
    commander_loyal: bool
    orders_sent: tuple[int, ...]
    records: tuple[LieutenantRecord, ...]
    final_time: float
    vacuous_bv_checks: int


# stream fork labels, fixed so any worker rebuilds the same shot
_F_MEASURE, _F_LOSS, _F_COMMANDER, _F_PLACEMENT, _F_TRAITOR0 = 0, 1, 2, 3, 10


def random_traitor_claim(stream: RngStream) -> Optional[int]:
    """Uniform draw over {0, 1, abort}; the baseline adversary each round."""
    pick = stream.integers(3)
    return None if pick == 2 else int(pick)


def run_shot(spec: ShotSpec, network: Network, stream: RngStream) -> ShotOutcome:
    """Distribute, measure, command and run the three classical rounds once."""
    scheme = IndexScheme(spec.n, spec.m)
    n1 = scheme.num_lieutenants
    if len(network.lieutenant_links) != n1:
        raise ParameterError(
            f"network has {len(network.lieutenant_links)} lieutenant links, need {n1}"
        )
    length = scheme.record_length
    queue = EventQueue()
    loss_rng = stream.fork(_F_LOSS)
    # One uniform per (node, index), drawn up front in canonical order so the
    # sampled bits never depend on event interleaving (heralded retries shift
    # times, not outcomes).  Row 0 is the commander.
    uniforms = stream.fork(_F_MEASURE).generator.random((spec.n, length))
    commander_stream = stream.fork(_F_COMMANDER)

    if spec.traitor_ids is not None:
        traitor_set = frozenset(spec.traitor_ids)
    elif spec.t > 0:
        picked = stream.fork(_F_PLACEMENT).generator.choice(n1, size=spec.t, replace=False)
        traitor_set = frozenset(int(x) for x in picked)
    else:
        traitor_set = frozenset()
    traitor_streams = {i: stream.fork(_F_TRAITOR0 + i) for i in traitor_set}

    a_bits = np.zeros(length, dtype=np.uint8)
    lt_bits = np.zeros((n1, length), dtype=np.uint8)
    remaining = [spec.n * length]  # bit records still to be written
    heralded = network.heralded
    c_link = network.commander_link
    l_links = network.lieutenant_links
    probs_cache: dict[int, tuple] = {}

    def probs_of(state) -> list:
        hit = probs_cache.get(id(state))
        if hit is None or hit[0] is not state:
            hit = (state, z_probabilities(state).tolist())
            probs_cache[id(state)] = hit
        return hit[1]

    decisions: list = [None] * n1
    orders: list = [0] * n1
    msgs1: dict = {}
    msgs2: dict = {}
    states: dict = {}

    def recorded(count: int) -> None:
        remaining[0] -= count
        if remaining[0] == 0:
            queue.schedule(queue.now + spec.classical_delay, command_phase)

    def measure_pair(p: int, i: int, state, lost_c: bool, lost_l: bool) -> None:
        if lost_c and lost_l:
            a_bits[p] = LOST_BIT
            lt_bits[i, p] = LOST_BIT
        elif lost_c:
            a_bits[p] = LOST_BIT
            lt_bits[i, p] = sample_index(probs_of(state), uniforms[1 + i, p])
        elif lost_l:
            a_bits[p] = sample_index(probs_of(state), uniforms[0, p])
            lt_bits[i, p] = LOST_BIT
        else:
            idx = sample_index(probs_of(state), uniforms[0, p])
            a_bits[p] = idx >> 1
            lt_bits[i, p] = idx & 1
        recorded(2)

    def send_pair(p: int, i: int) -> None:
        arr_c = transmit_qubit(queue, c_link, PSI_PLUS, 0, loss_rng)
        target = 0 if arr_c.lost else 1
        arr_l = transmit_qubit(queue, l_links[i], arr_c.state, target, loss_rng)
        if heralded and (arr_c.lost or arr_l.lost):
            t_detect = max(arr_c.arrival_time, arr_l.arrival_time)
            queue.schedule(t_detect, lambda: send_pair(p, i))
            return
        cell = [False]

        def half_arrived(
            _p=p, _i=i, _st=arr_l.state, _lc=arr_c.lost, _ll=arr_l.lost, _cell=cell
        ):
            if not _cell[0]:
                _cell[0] = True
                return
            measure_pair(_p, _i, _st, _lc, _ll)

        queue.schedule(arr_c.arrival_time, half_arrived)
        queue.schedule(arr_l.arrival_time, half_arrived)

    def send_filler(p: int, j: int) -> None:
        arr = transmit_qubit(queue, l_links[j], PLUS, 0, loss_rng)
        if heralded and arr.lost:
            queue.schedule(arr.arrival_time, lambda: send_filler(p, j))
            return

        def land(_p=p, _j=j, _arr=arr):
            if _arr.lost:
                lt_bits[_j, _p] = LOST_BIT
            else:
                lt_bits[_j, _p] = sample_index(probs_of(_arr.state), uniforms[1 + _j, _p])
            recorded(1)

        queue.schedule(arr.arrival_time, land)

    def emit_index(p: int) -> None:
        i = p % n1
        send_pair(p, i)
        for j in range(n1):
            if j != i:
                send_filler(p, j)

    def traitor_claim(i: int) -> Optional[int]:
        return random_traitor_claim(traitor_streams[i])

    def command_phase() -> None:
        if spec.commander_loyal:
            c = commander_stream.integers(2)
            orders[:] = [c] * n1
        else:
            orders[:] = [commander_stream.integers(2) for _ in range(n1)]
        for i in range(n1):
            v = build_command_vector(scheme, a_bits, i, orders[i])
            if i in traitor_set:
                states[i] = v  # traitors keep only their genuine material
            else:
                states[i] = LieutenantState(
                    scheme=scheme, i=i, bits=lt_bits[i], vector=v, tol=spec.tolerances
                )
        queue.schedule(queue.now + spec.classical_delay, round1)

    def round1() -> None:
        for i in range(n1):
            if i in traitor_set:
                claim = traitor_claim(i)
                msgs1[i] = RoundMessage(
                    sender=i,
                    round=1,
                    claim=claim,
                    proofs=(states[i],),
                    bits=lt_bits[i] if claim is None else None,
                )
            else:
                _, msgs1[i] = lieutenant_step(states[i], 1, None)
        queue.schedule(queue.now + spec.classical_delay, round2)

    def round2() -> None:
        for i in range(n1):
            if i in traitor_set:
                msgs2[i] = RoundMessage(
                    sender=i, round=2, claim=traitor_claim(i), proofs=(states[i],)
                )
            else:
                inbox = {j: msgs1[j] for j in range(n1) if j != i}
                _, msgs2[i] = lieutenant_step(states[i], 2, inbox)
        queue.schedule(queue.now + spec.classical_delay, round3)

    def round3() -> None:
        for i in range(n1):
            if i in traitor_set:
                decisions[i] = Decision.from_claim(traitor_claim(i))
            else:
                inbox = {j: msgs2[j] for j in range(n1) if j != i}
                d3, _ = lieutenant_step(states[i], 3, inbox)
                decisions[i] = Decision.from_claim(d3)

    for p in range(length):
        queue.schedule(0.0, lambda _p=p: emit_index(_p))
    final_time = run_until_idle(queue)

    if any(d is None for d in decisions):
        raise ProtocolDesyncError("some lieutenant never decided")

    records = []
    for i in range(n1):
        loyal = i not in traitor_set
        decision = decisions[i]
        if spec.commander_loyal:
            error = loyal and decision != Decision.from_claim(orders[i])
        else:
            error = loyal and decision != Decision.ABORT
        records.append(
            LieutenantRecord(
                lieutenant=i,
                loyal=loyal,
                order_sent=orders[i],
                decision=decision,
                error=error,
            )
        )
    vacuous = sum(
        s.vacuous_bv_checks for s in states.values() if isinstance(s, LieutenantState)
    )
    return ShotOutcome(
        rng_path=stream.path,
        commander_loyal=spec.commander_loyal,
        orders_sent=tuple(orders),
        records=tuple(records),
        final_time=final_time,
        vacuous_bv_checks=vacuous,
    )
