import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swarmseek.topology import TopologyGraph, local_best, neighbors


def test_fc_neighbors():
    assert neighbors(TopologyGraph("fc", 5), 0) == [1, 2, 3, 4]


def test_ring_neighbors():
    assert neighbors(TopologyGraph("ring", 5), 2) == [1, 3]
    assert neighbors(TopologyGraph("ring", 5), 0) == [1, 4]


def test_adaptive_is_seeded_subset():
    g = TopologyGraph("adaptive", 5, k=2)
    a = neighbors(g, 0, np.random.default_rng(42))
    b = neighbors(g, 0, np.random.default_rng(42))
    assert a == b
    assert len(set(a)) == 2 and set(a) <= {1, 2, 3, 4}


def test_adaptive_redraws_each_call():
    g = TopologyGraph("adaptive", 10, k=3)
    rng = np.random.default_rng(1)
    draws = {tuple(neighbors(g, 4, rng)) for _ in range(50)}
    assert len(draws) > 1
    assert all(4 not in d for d in draws)


def test_adaptive_needs_rng():
    with pytest.raises(ValueError):
        neighbors(TopologyGraph("adaptive", 5), 0)


def test_index_out_of_range():
    with pytest.raises(IndexError):
        neighbors(TopologyGraph("ring", 5), 5)


@pytest.mark.parametrize("kw", [dict(kind="ring", n=1), dict(kind="adaptive", n=5, k=0),
                                dict(kind="adaptive", n=5, k=5), dict(kind="star", n=5)])
def test_invalid_graphs(kw):
    with pytest.raises(ValueError):
        TopologyGraph(**kw)


def _bests(values):
    return [(np.array([float(i), 0.0]), v) for i, v in enumerate(values)]


def test_local_best_fc_is_global_argmax():
    bests = _bests([3, 9, 1, 2, 4])
    g = TopologyGraph("fc", 5)
    for i in range(5):
        np.testing.assert_array_equal(local_best(g, i, bests), (1, 0))


def test_ring_tie_break_lowest_index():
    bests = _bests([3, 9, 1, 9, 2])
    np.testing.assert_array_equal(local_best(TopologyGraph("ring", 5), 2, bests), (1, 0))


def test_ring_of_three_is_fully_connected():
    ring, fc = TopologyGraph("ring", 3), TopologyGraph("fc", 3)
    for i in range(3):
        assert neighbors(ring, i) == neighbors(fc, i)


@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=12), st.data())
def test_local_best_never_worse_than_own(values, data):
    n = len(values)
    kind = data.draw(st.sampled_from(["fc", "ring", "adaptive"]))
    g = TopologyGraph(kind, n, k=1 if kind == "adaptive" else 2)
    agent = data.draw(st.integers(0, n - 1))
    bests = _bests(values)
    lb = local_best(g, agent, bests, np.random.default_rng(agent))
    assert values[int(lb[0])] >= values[agent]


@pytest.mark.parametrize("n", [3, 4, 7, 12])
def test_ring_is_symmetric(n):
    g = TopologyGraph("ring", n)
    for i in range(n):
        for j in neighbors(g, i):
            assert i in neighbors(g, j)
