import math
from dataclasses import replace

import numpy as np
import pytest

from swarmseek.core import AlgorithmParams, RestrictedRandomMotion, SearchSpace, SourceModel
from swarmseek.engine import (
    ScenarioConfig,
    SourcePath,
    UnstableParamsError,
    default_scenario,
    first_contact,
    move_source,
    run_episode,
    segment_source_distance,
    trace_source,
)
from swarmseek.topology import TopologyGraph


@pytest.mark.parametrize("a, b, src, expected", [
    ((0, 0), (10, 0), (5, 1), 1.0),
    ((0, 0), (10, 0), (5, 0), 0.0),
    ((0, 0), (0, 0), (3, 4), 5.0),
])
def test_segment_source_distance(a, b, src, expected):
    assert segment_source_distance(a, b, src) == pytest.approx(expected, abs=1e-12)


def test_segment_distance_beyond_end_uses_endpoint():
    assert segment_source_distance((0, 0), (10, 0), (13, 4)) == pytest.approx(5.0)


def test_first_contact_time_on_straight_leg():
    t = first_contact((0, 0), (10, 0), 10.0, SourcePath.static((5, 0)), 0.1, 1.0)
    assert t == pytest.approx(0.49, abs=1e-12)
    assert first_contact((0, 0), (10, 0), 10.0, SourcePath.static((5, 1)), 0.1, 1.0) is None


def test_move_source_speed_zero_is_still():
    src = SourceModel((50, 50), motion=RestrictedRandomMotion(speed=0.0, center=(50, 50)))
    out = move_source(src, 10.0, np.random.default_rng(0))
    assert out.xy.tolist() == [50.0, 50.0]


@pytest.mark.parametrize("seed", range(20))
def test_move_source_bounded(seed):
    src = SourceModel((50, 50), motion=RestrictedRandomMotion(radius=4, speed=0.3, center=(50, 50)))
    new, path = trace_source(src, 10.0, np.random.default_rng(seed))
    assert np.hypot(*(new.xy - src.xy)) <= 3.0 + 1e-9
    offsets = np.hypot(*(path.positions - np.array([50.0, 50.0])).T)
    assert np.all(offsets <= 4.0 + 1e-9)
    steps = np.hypot(*np.diff(path.positions, axis=0).T)
    assert np.all(steps <= 0.3 * 0.1 + 1e-9)


def test_move_source_rejects_static():
    with pytest.raises(ValueError):
        move_source(SourceModel(), 1.0, np.random.default_rng(0))


def test_immediate_success():
    rec = run_episode(default_scenario(termination_radius=200.0))
    assert rec.success and rec.iterations == 0
    assert rec.seeking_time == 0 and rec.swarm_distance == 0


def test_max_iterations_zero_rejected():
    with pytest.raises(ValueError):
        default_scenario(max_iterations=0)


def test_single_iteration_failure():
    rec = run_episode(default_scenario(max_iterations=1, seed=3))
    assert not rec.success and rec.iterations == 1
    assert rec.seeking_time > 0


def test_topology_size_must_match():
    with pytest.raises(ValueError):
        ScenarioConfig(n=6)


def test_deterministic():
    cfg = default_scenario(seed=42, record_trajectories=True)
    a, b = run_episode(cfg), run_episode(cfg)
    assert a.trajectories == b.trajectories
    assert (a.iterations, a.seeking_time, a.per_agent_distance) == (b.iterations, b.seeking_time,
                                                                    b.per_agent_distance)


def test_seed_changes_outcome():
    a = run_episode(default_scenario(seed=1))
    b = run_episode(default_scenario(seed=2))
    assert (a.iterations, a.seeking_time) != (b.iterations, b.seeking_time)


@pytest.mark.parametrize("variant", ["pso", "spso", "arpso", "apso"])
def test_defaults_reach_source(variant):
    wins = 0
    for seed in range(10):
        cfg = default_scenario(seed=seed, algorithm=AlgorithmParams(variant))
        rec = run_episode(cfg)
        wins += rec.success and rec.iterations < 500
    assert wins >= 7


@pytest.mark.parametrize("seed", range(8))
def test_time_and_distance_consistent(seed):
    cfg = default_scenario(seed=seed, record_trajectories=True)
    rec = run_episode(cfg)
    assert 0 < rec.seeking_time
    # every agent flies at most uav_speed for the elapsed time
    for d in rec.per_agent_distance:
        assert d <= cfg.uav_speed * rec.seeking_time + 1e-6
    # each iteration the longest leg lasts the whole iteration
    assert rec.swarm_distance >= cfg.uav_speed * rec.seeking_time * (1 - 1e-9)
    pts = np.array([row[2:4] for row in rec.trajectories])
    assert np.all((pts >= 0) & (pts <= 100))


def test_trajectory_rows_per_iteration():
    rec = run_episode(default_scenario(seed=5, record_trajectories=True))
    iters = [row[0] for row in rec.trajectories]
    assert iters == sorted(iters)
    assert len(rec.trajectories) == 5 * rec.iterations


def test_ring_of_three_equals_fc():
    base = dict(n=3, seed=9, algorithm=AlgorithmParams("spso"), record_trajectories=True)
    fc = run_episode(default_scenario(topology=TopologyGraph("fc", 3), **base))
    ring = run_episode(default_scenario(topology=TopologyGraph("ring", 3), **base))
    assert fc.trajectories == ring.trajectories


def test_unstable_apso_refused():
    bad = AlgorithmParams(w1=1.5, w2=1.5)
    with pytest.raises(UnstableParamsError) as info:
        run_episode(default_scenario(algorithm=bad))
    assert "C14" in str(info.value)


def test_divergence_guard():
    wild = AlgorithmParams(w1=1.5, w2=1.5, allow_unstable=True)
    rec = run_episode(default_scenario(algorithm=wild, seed=1))
    assert rec.diverged and not rec.success
    assert rec.iterations < 500


def test_moving_source_mostly_found():
    src = SourceModel((50, 50), motion=RestrictedRandomMotion(speed=0.3, center=(50, 50)))
    wins = sum(run_episode(default_scenario(source=src, seed=s)).success for s in range(20))
    assert wins >= 14


def test_larger_space_scales_distance():
    small = [run_episode(default_scenario(seed=s, space=SearchSpace(10.0),
                                          source=SourceModel((5, 5)))) for s in range(20)]
    big = [run_episode(default_scenario(seed=s)) for s in range(20)]
    assert np.mean([r.swarm_distance for r in small]) < np.mean([r.swarm_distance for r in big])
