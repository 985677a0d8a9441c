import math

import numpy as np
import pytest

from app.analytics import dkw_band, dominance_check, reference_cdf
from app.core.errors import DomainError, InsufficientSampleError


def test_dkw_band():
    assert dkw_band(1000, 0.99) == pytest.approx(math.sqrt(math.log(200.0) / 2000.0))
    with pytest.raises(InsufficientSampleError):
        dkw_band(0)
    with pytest.raises(DomainError):
        dkw_band(10, 1.0)


def test_reference_cdf_shape():
    ks = np.arange(0, 10)
    values = reference_cdf(ks, 3, 0.25)
    assert np.all(values[:4] == 0.0)
    assert values[4] == pytest.approx(0.25)
    assert np.all(np.diff(values) >= 0)


def test_reference_itself_passes_with_full_band():
    ks = np.arange(1, 300)
    points = list(zip(ks.tolist(), reference_cdf(ks, 5, 0.2).tolist()))
    result = dominance_check(points, 5, 0.2, trials=2000)
    assert result.passed
    assert result.margin == pytest.approx(result.band)


def test_slower_distribution_fails():
    ks = np.arange(1, 300)
    points = list(zip(ks.tolist(), reference_cdf(ks, 15, 0.2).tolist()))
    result = dominance_check(points, 5, 0.2, trials=5000)
    assert not result.passed
    assert 5 < result.worst_k <= 20


def test_needs_enough_samples():
    with pytest.raises(InsufficientSampleError):
        dominance_check([(1, 1.0)], 0, 0.5, trials=999)
