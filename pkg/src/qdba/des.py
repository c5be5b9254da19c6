"""Discrete-event core: event queue, splittable RNG streams, quantum links.

The queue is a plain binary heap ordered by (time, seq).  seq is the
insertion counter, so simultaneous events fire in scheduling order and a
run is reproducible from its seed alone, with no dependence on hash
ordering or wall clock.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Optional, Union

import numpy as np

from .quantum import DensityMatrix, KrausChannel, ParameterError, apply_channel, lose_qubit


class SchedulingError(RuntimeError):
    """An event was scheduled before the current clock."""


class Event(NamedTuple):
    time: float
    seq: int
    payload: object


class EventQueue:
    """Min-heap of events with a monotone clock."""

    def __init__(self) -> None:
        self.now = 0.0
        self._seq = 0
        self._heap: list[Event] = []

    def __len__(self) -> int:
        return len(self._heap)

    def schedule(self, time: float, payload: object) -> Event:
        if time < self.now:
            raise SchedulingError(f"cannot schedule at {time} before now={self.now}")
        ev = Event(time, self._seq, payload)
        self._seq += 1
        heapq.heappush(self._heap, ev)
        return ev


def run_until_idle(queue: EventQueue, handler: Optional[Callable[[Event], None]] = None) -> float:
    """Drain the queue, dispatching each event; returns the final clock.

    With no handler, payloads are invoked as zero-argument callables.
    Returns 0.0 if the queue was empty to begin with.
    """
    heap = queue._heap
    pop = heapq.heappop
    if handler is None:
        while heap:
            ev = pop(heap)
            queue.now = ev.time
            ev.payload()
    else:
        while heap:
            ev = pop(heap)
            queue.now = ev.time
            handler(ev)
    return queue.now


# ---------------------------------------------------------------------------
# random streams
# ---------------------------------------------------------------------------


class RngStream:
    """Lazily constructed PCG64 stream keyed by (root seed, integer path).

    Forking appends a label to the path and never touches the parent, so
    any (run, shot, node, purpose) stream can be rebuilt independently on
    any worker.  fork() of the same label is repeatable by construction.
    """

    __slots__ = ("seed", "path", "_generator")

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        if not 0 <= seed < 2**64:
            raise ParameterError(f"seed {seed} outside [0, 2^64)")
        self.seed = seed
        self.path = tuple(path)
        self._generator = None

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            ss = np.random.SeedSequence(self.seed, spawn_key=self.path)
            self._generator = np.random.Generator(np.random.PCG64(ss))
        return self._generator

    def fork(self, label: int) -> "RngStream":
        return RngStream(self.seed, self.path + (label,))

    def random(self) -> float:
        return self.generator.random()

    def integers(self, high: int) -> int:
        return int(self.generator.integers(high))


def fork_stream(parent: RngStream, label: int) -> RngStream:
    return parent.fork(label)


# ---------------------------------------------------------------------------
# quantum links
# ---------------------------------------------------------------------------

LOSS_MODES = ("none", "heralded", "unheralded")


@dataclass(frozen=True)
class LossRule:
    """Carrier loss hook: the qubit survives transit with this probability."""

    survival: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.survival <= 1.0:
            raise ParameterError(f"survival {self.survival} outside [0, 1]")


@dataclass(frozen=True, eq=False)
class QuantumLink:
    """One directed channel; hooks apply in declared order during transit."""

    endpoints: tuple[str, str]
    delay: float = 0.0
    hooks: tuple[Union[KrausChannel, LossRule], ...] = ()
    loss_mode: str = "none"

    def __post_init__(self) -> None:
        if self.delay < 0:
            raise ParameterError(f"delay {self.delay} must be >= 0")
        if self.loss_mode not in LOSS_MODES:
            raise ParameterError(f"loss_mode {self.loss_mode!r} not in {LOSS_MODES}")
        lossy = any(isinstance(h, LossRule) for h in self.hooks)
        object.__setattr__(self, "has_loss_rule", lossy)


@dataclass(frozen=True)
class Arrival:
    """What a transmission left behind: evolved state (None if nothing), loss flag."""

    state: Optional[DensityMatrix]
    lost: bool
    arrival_time: float


@lru_cache(maxsize=2048)
def _evolve_kraus(link: QuantumLink, state: DensityMatrix, target: int) -> DensityMatrix:
    # Pure Kraus evolution is deterministic, so identical (link, state, target)
    # triples share one result.  Loss rules are sampled by the caller.
    out = state
    for hook in link.hooks:
        out = apply_channel(out, hook, target)
    return out


def transmit_qubit(
    queue: EventQueue,
    link: QuantumLink,
    state: DensityMatrix,
    target_qubit: int,
    rng: RngStream,
    deliver: Optional[Callable[["Arrival"], None]] = None,
) -> Arrival:
    """Send qubit `target_qubit` of `state` through `link`.

    Applies the link's hooks in order; a triggered loss rule ends transit
    (later hooks never see the carrier).  On loss of one half of a pair the
    partner is traced out and returned; a lost lone qubit leaves None.
    With `deliver`, an arrival event is scheduled at now + delay.
    """
    arrival_time = queue.now + link.delay
    lost = False
    sample_loss = link.loss_mode != "none"
    if link.has_loss_rule:
        out = state
        for hook in link.hooks:
            if isinstance(hook, LossRule):
                if sample_loss and rng.random() >= hook.survival:
                    lost = True
                    break
            else:
                out = apply_channel(out, hook, target_qubit)
    else:
        out = _evolve_kraus(link, state, target_qubit)
    if lost:
        out = lose_qubit(out, target_qubit) if out.num_qubits == 2 else None
    arrival = Arrival(out, lost, arrival_time)
    if deliver is not None:
        queue.schedule(arrival_time, lambda: deliver(arrival))
    return arrival
