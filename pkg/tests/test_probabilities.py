import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from app.analytics import enumerate_round, exact_round_success, q_pair, rho
from app.core.errors import DomainError, EnumerationCapError
from app.schemas.protocol_schema import ElectionParams, ProtocolKind

ALPHA_FOR_LENGTH = {1: 1.0 + 1e-13, 2: 2.0, 3: 3.0}


def test_rho_and_q_pair_small_values():
    assert rho(1, 2) == pytest.approx(0.5)
    assert rho(2, 4) == pytest.approx(4 / 4 * (3 / 4) ** 3)
    assert q_pair(1, 2) == pytest.approx(0.125)
    assert q_pair(2, 3) == pytest.approx(0.5 * 3 / 16 * 3 / 4)
    assert q_pair(1, 3) == pytest.approx(3 / 16)


@pytest.mark.parametrize("bad", [(0, 4), (1, 1), (1.5, 4)])
def test_rho_rejects_bad_arguments(bad):
    with pytest.raises(DomainError):
        rho(*bad)
    with pytest.raises(DomainError):
        q_pair(*bad)


def test_large_arguments_stay_finite():
    n = 2**40
    assert 0.0 < rho(40, n) < 1.0
    assert rho(40, n) == pytest.approx(math.exp(-1.0), rel=1e-9)
    assert rho(120, n) == pytest.approx(2.0**-80, rel=1e-9)
    assert 0.0 <= q_pair(5, n) < 1e-300


@pytest.mark.parametrize("kind", list(ProtocolKind), ids=lambda kind: kind.value)
@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("length", [1, 2, 3])
@pytest.mark.parametrize("k0", [1, 2])
def test_closed_form_matches_enumeration(kind, n, length, k0):
    report = exact_round_success(ElectionParams(n=n, alpha=ALPHA_FOR_LENGTH[length], k0=k0), kind, 1)
    assert report.inner_length == length
    enumerated = enumerate_round(kind, n, list(range(k0, k0 + length)), "formula")
    assert abs(report.success - enumerated) <= 1e-12


def test_exact_enumeration_for_two_stations():
    assert enumerate_round(ProtocolKind.ALG1_STRONG, 2, [1], exact=True) == Fraction(1, 2)
    assert enumerate_round(ProtocolKind.ALG2_WEAK, 2, [1], exact=True) == Fraction(1, 8)


def test_report_selects_protocol():
    params = ElectionParams(n=16, alpha=2.0)
    alg1 = exact_round_success(params, ProtocolKind.ALG1_STRONG, 3)
    alg2 = exact_round_success(params, ProtocolKind.ALG2_WEAK, 3)
    assert alg1.success == alg1.p_j
    assert alg2.success == alg2.p_prime_j
    assert alg1.p_j == pytest.approx(alg1.t_j * alg1.s_j)
    assert len(alg1.rho_values) == 8


def test_round_length_cap():
    with pytest.raises(EnumerationCapError):
        exact_round_success(ElectionParams(n=4, alpha=2.0), ProtocolKind.ALG1_STRONG, 5, enumeration_cap=16)


@given(st.integers(min_value=2, max_value=10**9), st.integers(min_value=1, max_value=60))
def test_probabilities_are_probabilities(n, k):
    assert 0.0 <= rho(k, n) <= 1.0
    assert 0.0 <= q_pair(k, n) <= 1.0


@given(st.integers(min_value=2, max_value=10**6), st.floats(min_value=1.05, max_value=2.0))
def test_no_unique_slot_probability_shrinks_as_rounds_grow(n, alpha):
    params = ElectionParams(n=n, alpha=alpha)
    reports = [exact_round_success(params, ProtocolKind.ALG1_STRONG, j) for j in range(1, 7)]
    for earlier, later in zip(reports, reports[1:]):
        assert later.s_j <= earlier.s_j
    for report in reports:
        assert report.p_j == pytest.approx(report.t_j * report.s_j, rel=1e-10, abs=1e-300)
