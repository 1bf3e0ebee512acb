import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swarmseek.core import SourceModel
from swarmseek.sensor import SensorConfig, measure

SRC = SourceModel((0.0, 0.0), power=100.0, alpha=0.001)
QUIET = SensorConfig(0.0)


def test_at_source():
    assert measure(SRC, (0, 0), QUIET, None) == 100.0


def test_at_ten_metres():
    # 100 * exp(-0.001 * 10**2) evaluated directly
    assert measure(SRC, (6, 8), QUIET, None) == pytest.approx(90.48374180359595, rel=1e-14)


def test_noise_statistics():
    rng = np.random.default_rng(11)
    cfg = SensorConfig(0.05)
    xs = np.array([measure(SRC, (10, 0), cfg, rng) for _ in range(100_000)])
    assert abs(xs.mean() - 90.48374180359595) / 90.48374180359595 < 0.005
    assert abs(xs.std(ddof=1) - 4.524187090179797) / 4.524187090179797 < 0.05


def test_noise_is_reproducible():
    cfg = SensorConfig(0.1)
    a = [measure(SRC, (3, 1), cfg, np.random.default_rng(5)) for _ in range(3)]
    assert a[0] == a[1] == a[2]


def test_noise_is_not_clamped():
    # huge noise fraction must be able to push readings below zero
    rng = np.random.default_rng(0)
    xs = [measure(SRC, (1, 1), SensorConfig(5.0), rng) for _ in range(200)]
    assert min(xs) < 0


def test_negative_noise_fraction_rejected():
    with pytest.raises(ValueError):
        SensorConfig(-0.01)


@given(st.floats(0, 150), st.floats(0, 150))
def test_noiseless_strictly_decreasing(d1, d2):
    if d1 == d2:
        return
    lo, hi = sorted((d1, d2))
    m_lo, m_hi = measure(SRC, (lo, 0), QUIET, None), measure(SRC, (hi, 0), QUIET, None)
    if m_lo > 0 and m_hi > 0 and hi - lo > 1e-6:
        assert m_lo > m_hi


def test_maximum_at_source():
    pts = np.random.default_rng(2).uniform(-50, 50, size=(500, 2))
    peak = measure(SRC, (0, 0), QUIET, None)
    assert all(measure(SRC, p, QUIET, None) < peak for p in pts if np.any(p != 0))
