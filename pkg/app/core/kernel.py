"""
Round kernels and random-draw derivation.

Every round of every trial draws from its own counter-based stream
(Philox keyed by SeedSequence([seed, trial, round, stream])), so a draw is a
pure function of (seed, trial_index, round, slot, station position) and
trials can run in any order or process.

Two ways to produce the probabilistic phase of a round:

* dense  - one uniform per (slot, station, variate), consumed exactly the way
           ``station_act`` consumes them;
* sparse - the awake set of slot k is drawn directly as Binomial(n, 2^-k)
           distinct station indices, then Alg2 roles; O(n) work per round.

``play_round`` evaluates a round from its slot draws with numpy; the
reference path ``play_round_reference`` drives the per-station state machines
through ``resolve_slot`` and must agree with it on dense draws.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..schemas.protocol_schema import Phase, ProtocolKind, RoundSchedule, StationState
from ..schemas.sim_schema import SamplerKind
from .channel import resolve_slot
from .errors import DomainError
from .protocols import round_outcome, station_act, station_update, wake_probability

ELECTION_STREAM = 0
STANDALONE_ROUND_STREAM = 1

# Last inner slot the sparse sampler draws for; wake probability 2^-60.
SPARSE_K_LIMIT = 60
DENSE_DRAW_CAP = 2**24

_EMPTY = np.empty(0, dtype=np.int64)


@dataclass(frozen=True)
class SlotDraw:
    """Who is awake in inner slot k, split by role."""

    k: int
    transmitters: np.ndarray
    listeners: np.ndarray = _EMPTY


@dataclass
class RoundResult:
    elected: Optional[int]
    awake: np.ndarray
    slots: int
    leaders_claimed: int
    informed: int


def round_generator(seed: int, trial_index: int, round_index: int, stream: int = ELECTION_STREAM) -> np.random.Generator:
    """Independent counter-based generator for one (seed, trial, round, stream)."""
    key = np.random.SeedSequence([seed, trial_index, round_index, stream])
    return np.random.Generator(np.random.Philox(key))


def dense_uniforms(kind: ProtocolKind, n: int, schedule: RoundSchedule, rng: np.random.Generator) -> np.ndarray:
    """
    Array u[slot, station, variate] of shape (L_j, n, draws_per_slot).

    Raises:
        DomainError: the array would exceed DENSE_DRAW_CAP variates.
    """
    size = schedule.inner_length * n * kind.draws_per_slot
    if size > DENSE_DRAW_CAP:
        raise DomainError(
            f"round {schedule.round_index} needs {size} dense draws (cap {DENSE_DRAW_CAP}); use the sparse sampler"
        )
    return rng.random((schedule.inner_length, n, kind.draws_per_slot))


def slot_draws_from_uniforms(kind: ProtocolKind, schedule: RoundSchedule, uniforms: np.ndarray) -> List[SlotDraw]:
    draws = []
    for offset, k in enumerate(schedule.k_values):
        awake = uniforms[offset, :, 0] < wake_probability(k)
        if kind is ProtocolKind.ALG1_STRONG:
            draws.append(SlotDraw(k=k, transmitters=np.flatnonzero(awake)))
            continue
        sends = uniforms[offset, :, 1] < 0.5
        draws.append(
            SlotDraw(
                k=k,
                transmitters=np.flatnonzero(awake & sends),
                listeners=np.flatnonzero(awake & ~sends),
            )
        )
    return draws


def sparse_slot_draws(kind: ProtocolKind, n: int, schedule: RoundSchedule, rng: np.random.Generator) -> List[SlotDraw]:
    """
    Awake sets of the inner slots up to k = SPARSE_K_LIMIT.

    Later slots are left empty without drawing; a station wakes there with
    probability at most 2^-61.
    """
    draws = []
    for k in range(schedule.k_start, min(schedule.k_start + schedule.inner_length, SPARSE_K_LIMIT + 1)):
        count = int(rng.binomial(n, wake_probability(k)))
        if count == 0:
            draws.append(SlotDraw(k=k, transmitters=_EMPTY, listeners=_EMPTY))
            continue
        awake = np.sort(rng.choice(n, size=count, replace=False))
        if kind is ProtocolKind.ALG1_STRONG:
            draws.append(SlotDraw(k=k, transmitters=awake))
            continue
        sends = rng.random(count) < 0.5
        draws.append(SlotDraw(k=k, transmitters=awake[sends], listeners=awake[~sends]))
    return draws


def draw_round(
    sampler: SamplerKind,
    kind: ProtocolKind,
    n: int,
    schedule: RoundSchedule,
    rng: np.random.Generator,
) -> List[SlotDraw]:
    if sampler == "dense":
        return slot_draws_from_uniforms(kind, schedule, dense_uniforms(kind, n, schedule, rng))
    if sampler == "sparse":
        return sparse_slot_draws(kind, n, schedule, rng)
    raise DomainError(f"unknown sampler {sampler!r}")


def _announce(claimants: Sequence[int], n: int) -> Tuple[Optional[int], int]:
    """
    Deterministic slot in which ``claimants`` transmit and every other station
    listens: (elected station, stations that learned the result).

    A lone claimant is heard by all n - 1 listeners and settles itself; with
    two or more the slot is NULL and nobody learns anything.
    """
    if len(claimants) == 1:
        return claimants[0], n
    return None, 0


def play_round(kind: ProtocolKind, n: int, schedule: RoundSchedule, slot_draws: Sequence[SlotDraw]) -> RoundResult:
    """Evaluate one round from its slot draws."""
    awake = np.full(n, schedule.deterministic_slots, dtype=np.int64)

    if kind is ProtocolKind.ALG1_STRONG:
        candidates = set()
        for draw in slot_draws:
            awake[draw.transmitters] += 1
            if draw.transmitters.size == 1:
                candidates.add(int(draw.transmitters[0]))
        claimants = sorted(candidates)
        elected, informed = _announce(claimants, n)
        # Candidates hear noise on a NULL slot and stay undecided.
        leaders_claimed = len(claimants) if elected is not None else 0
    else:
        records = {}
        initiators = {}
        for draw in slot_draws:
            awake[draw.transmitters] += 1
            awake[draw.listeners] += 1
            if draw.transmitters.size == 1:
                initiators[draw.k] = int(draw.transmitters[0])
                records.update(dict.fromkeys(draw.listeners.tolist(), draw.k))

        # Forward slot: every witness transmits its record, everyone else listens.
        # On SINGLE(<k>) the listening station that transmitted at k becomes pending.
        pending = []
        if len(records) == 1:
            ((witness, k),) = records.items()
            pending = [station for station in (initiators[k],) if station != witness]
        # Confirm slot: pending stations commit on sending, with no feedback.
        elected, informed = _announce(pending, n)
        leaders_claimed = len(pending)
        informed = max(informed, leaders_claimed)

    return RoundResult(
        elected=elected,
        awake=awake,
        slots=schedule.total_slots,
        leaders_claimed=leaders_claimed,
        informed=informed,
    )


def play_round_reference(
    kind: ProtocolKind,
    schedule: RoundSchedule,
    uniforms: np.ndarray,
    states: Sequence[StationState],
) -> Tuple[RoundResult, List[StationState]]:
    """Run one round slot by slot through the per-station state machines."""
    n = len(states)
    states = [state.start_round() for state in states]
    awake = np.zeros(n, dtype=np.int64)

    phases = [(Phase.inner(k), offset) for offset, k in enumerate(schedule.k_values)]
    phases += [(Phase.det(index), None) for index in range(1, schedule.deterministic_slots + 1)]

    for phase, offset in phases:
        actions = [
            station_act(kind, state, phase, None if offset is None else uniforms[offset, position])
            for position, state in enumerate(states)
        ]
        outcome = resolve_slot(kind.model, actions)
        states = [
            station_update(kind, state, phase, action, observation)
            for state, action, observation in zip(states, actions, outcome.observations)
        ]
        awake += np.fromiter((action.awake for action in actions), dtype=np.int64, count=n)

    verdict = round_outcome(kind, states)
    result = RoundResult(
        elected=verdict.elected,
        awake=awake,
        slots=schedule.total_slots,
        leaders_claimed=sum(state.is_leader for state in states),
        informed=sum(state.leader_known for state in states),
    )
    return result, states
