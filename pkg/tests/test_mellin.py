import math

import pytest

from app.analytics import fluctuation_mean, mellin_asymptote, mellin_check, mellin_sweep
from app.core.errors import DomainError


def test_u_asymptote_at_one():
    assert mellin_asymptote("U", 1) == pytest.approx(1.0 / math.log(2.0))


def test_v_literal_constant_agrees_only_at_one():
    assert mellin_asymptote("V", 1, literal=True) == pytest.approx(mellin_asymptote("V", 1))
    assert mellin_asymptote("V", 2, literal=True) == pytest.approx(mellin_asymptote("V", 2) / 2)


@pytest.mark.parametrize("variant", ["U", "V"])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_residual_within_bound(variant, m):
    for report in mellin_sweep(variant, m, r=64, points=8):
        assert report.within_bound, report


def test_check_reports_inputs():
    report = mellin_check("U", 2, 2.0**20, 64)
    assert report.m == 2
    assert report.residual == pytest.approx(abs(report.direct_sum - report.asymptote))
    assert report.fluctuation_bound == pytest.approx(report.amplitude_bound / 8)


def test_u_fluctuation_has_zero_mean():
    assert abs(fluctuation_mean("U", 1)) < 1e-8


def test_sweep_size():
    assert len(mellin_sweep("U", 1, points=5)) == 5


@pytest.mark.parametrize("args", [("W", 1, 1024.0, 64), ("U", 0, 1024.0, 64), ("U", 1, 1024.0, 0), ("U", 1, -1.0, 64)])
def test_check_rejects_bad_arguments(args):
    with pytest.raises(DomainError):
        mellin_check(*args)


def test_single_term_sum():
    assert mellin_check("U", 1, 2.0, 1).direct_sum == pytest.approx(math.exp(-1.0), rel=1e-15)
