"""
Brute-force enumeration oracle for one round.

Every station independently picks a per-slot state:

    Alg1: 0 = asleep, 1 = awake (transmit-and-listen)     -> 2^(nL) patterns
    Alg2: 0 = asleep, 1 = transmit, 2 = listen            -> 3^(nL) patterns

Two events are evaluated over the weighted patterns:

    "formula"  - exactly one inner slot has the success configuration
                 (a unique transmitter for Alg1; exactly one initiator and
                 one witness and nobody else awake for Alg2). This is the
                 event the closed forms p_j / p'_j count.
    "election" - the round actually elects: exactly one candidate station
                 (Alg1) or exactly one witness station (Alg2).
"""

import itertools
from fractions import Fraction
from typing import Literal, Sequence, Union

import numpy as np

from ..core.errors import DomainError, EnumerationCapError
from ..schemas.protocol_schema import ProtocolKind

EventKind = Literal["formula", "election"]

MAX_PATTERNS = 10**6
MAX_EXACT_PATTERNS = 3**8


def _states(kind: ProtocolKind) -> int:
    return 2 if kind is ProtocolKind.ALG1_STRONG else 3


def _pattern_count(kind: ProtocolKind, n: int, slots: int) -> int:
    return _states(kind) ** (n * slots)


def _state_weights(kind: ProtocolKind, k: int, exact: bool):
    awake = Fraction(1, 2**k) if exact else float(np.ldexp(1.0, -k))
    if kind is ProtocolKind.ALG1_STRONG:
        return (1 - awake, awake)
    return (1 - awake, awake / 2, awake / 2)


def _patterns(kind: ProtocolKind, n: int, slots: int) -> np.ndarray:
    """All patterns as an array of shape (P, slots, n) of station states."""
    base = _states(kind)
    digits = n * slots
    codes = np.arange(base**digits, dtype=np.int64)
    powers = base ** np.arange(digits, dtype=np.int64)
    return ((codes[:, None] // powers) % base).astype(np.int8).reshape(-1, slots, n)


def _event_mask(kind: ProtocolKind, states: np.ndarray, event: EventKind) -> np.ndarray:
    """Boolean mask over the leading axis of ``states`` (P, slots, n)."""
    transmits = states == 1
    tx_count = transmits.sum(axis=2)

    if kind is ProtocolKind.ALG1_STRONG:
        unique = tx_count == 1
        if event == "formula":
            return unique.sum(axis=1) == 1
        candidates = (transmits & unique[:, :, None]).any(axis=1)
        return candidates.sum(axis=1) == 1

    listens = states == 2
    if event == "formula":
        pair = (tx_count == 1) & (listens.sum(axis=2) == 1)
        return pair.sum(axis=1) == 1
    witnesses = (listens & (tx_count == 1)[:, :, None]).any(axis=1)
    return witnesses.sum(axis=1) == 1


def enumerate_round(
    kind: ProtocolKind,
    n: int,
    k_values: Sequence[int],
    event: EventKind = "formula",
    exact: bool = False,
) -> Union[float, Fraction]:
    """
    Probability of ``event`` in one round over inner slots ``k_values``.

    With ``exact=True`` the weights are Fractions and the sum is exact; only
    small cases are allowed there.

    Raises:
        EnumerationCapError: too many patterns to enumerate.
    """
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if not k_values or min(k_values) < 1:
        raise DomainError("k_values must be a non-empty sequence of slot indices >= 1")
    if event not in ("formula", "election"):
        raise DomainError(f"unknown event {event!r}")

    slots = len(k_values)
    count = _pattern_count(kind, n, slots)
    cap = MAX_EXACT_PATTERNS if exact else MAX_PATTERNS
    if count > cap:
        raise EnumerationCapError(f"{count} patterns for n={n}, {slots} slot(s) exceeds the cap of {cap}")

    if exact:
        return _enumerate_exact(kind, n, list(k_values), event)

    states = _patterns(kind, n, slots)
    table = np.array([_state_weights(kind, k, exact=False) for k in k_values])
    weights = table[np.arange(slots)[None, :, None], states].prod(axis=(1, 2))
    return float(weights[_event_mask(kind, states, event)].sum())


def _enumerate_exact(kind: ProtocolKind, n: int, k_values: Sequence[int], event: EventKind) -> Fraction:
    slots = len(k_values)
    tables = [_state_weights(kind, k, exact=True) for k in k_values]
    total = Fraction(0)
    for flat in itertools.product(range(_states(kind)), repeat=n * slots):
        states = np.array(flat, dtype=np.int8).reshape(1, slots, n)
        if not _event_mask(kind, states, event)[0]:
            continue
        weight = Fraction(1)
        for offset, state in enumerate(flat):
            weight *= tables[offset // n][state]
        total += weight
    return total
