import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmseek.core import (
    AlgorithmParams,
    RestrictedRandomMotion,
    SearchSpace,
    SourceModel,
    UavState,
    clamp_to_space,
    perimeter_point,
)

SPACE = SearchSpace(100.0)
coords = st.floats(-1e4, 1e4, allow_nan=False)


@pytest.mark.parametrize("p, expected", [
    ((50, 50), (50, 50)),
    ((-5, 50), (0, 50)),
    ((120, -3), (100, 0)),
])
def test_clamp_examples(p, expected):
    np.testing.assert_array_equal(clamp_to_space(p, SPACE), expected)


@given(coords, coords)
def test_clamp_idempotent_and_inside(x, y):
    once = clamp_to_space((x, y), SPACE)
    np.testing.assert_array_equal(clamp_to_space(once, SPACE), once)
    assert np.all(once >= 0) and np.all(once <= 100)


def test_clamp_respects_origin():
    space = SearchSpace(10.0, (5.0, -5.0))
    np.testing.assert_array_equal(clamp_to_space((0, 0), space), (5, 0))


@pytest.mark.parametrize("u, expected", [
    (0.0, (0, 0)),
    (0.25, (100, 0)),
    (0.5, (100, 100)),
    (0.75, (0, 100)),
    (0.125, (50, 0)),
    (0.875, (0, 50)),
])
def test_perimeter_examples(u, expected):
    np.testing.assert_allclose(perimeter_point(SPACE, u), expected, atol=1e-12)


@pytest.mark.parametrize("u", [-0.1, 1.0, 1.5])
def test_perimeter_rejects_out_of_range(u):
    with pytest.raises(ValueError):
        perimeter_point(SPACE, u)


def test_perimeter_on_boundary_and_injective():
    us = np.random.default_rng(3).uniform(0, 1, 1000)
    pts = np.array([perimeter_point(SPACE, u) for u in us])
    to_edge = np.minimum.reduce([pts[:, 0], 100 - pts[:, 0], pts[:, 1], 100 - pts[:, 1]])
    assert np.all(np.abs(to_edge) < 1e-9)
    assert np.all(pts >= 0) and np.all(pts <= 100)
    assert len({tuple(np.round(p, 9)) for p in pts}) == len(set(us))


def test_perimeter_arc_length_is_uniform():
    # equal steps in u give equal arc-length steps between consecutive points
    pts = [perimeter_point(SPACE, u) for u in np.arange(0, 1, 1 / 40)]
    gaps = [np.hypot(*(b - a)) for a, b in zip(pts, pts[1:])]
    np.testing.assert_allclose(gaps, 10.0)


def test_search_space_validation():
    with pytest.raises(ValueError):
        SearchSpace(0.0)
    with pytest.raises(ValueError):
        SearchSpace(-3.0)


@pytest.mark.parametrize("kw", [dict(c1=0), dict(c2=-1), dict(c3=-0.1), dict(T=0),
                                dict(omega_min=0.9, omega_max=0.4)])
def test_params_validation(kw):
    with pytest.raises(ValueError):
        AlgorithmParams(**kw)


def test_params_reference_defaults():
    p = AlgorithmParams()
    assert (p.w1, p.w2, p.c1, p.c2, p.T, p.omega, p.c3) == (0.675, -0.285, 1.193, 1.193, 1.0, 0.721, 0.0)


def test_source_validation():
    with pytest.raises(ValueError):
        SourceModel(power=0)
    with pytest.raises(ValueError):
        SourceModel(alpha=0)
    with pytest.raises(ValueError):
        SourceModel((10, 0), motion=RestrictedRandomMotion(radius=4, center=(0, 0)))


def test_state_at_rest():
    s = UavState.at_rest((3, 4), 7.5)
    np.testing.assert_array_equal(s.velocity, 0)
    np.testing.assert_array_equal(s.acceleration, 0)
    np.testing.assert_array_equal(s.best_position, (3, 4))
    assert s.best_value == 7.5 and s.distance == 0
    assert s.best_position is not s.position
