"""Source-seeking episodes: synchronous waypoint iterations at constant flight speed.

Time model: every iteration all agents leave their waypoints together and
fly straight to the next one at ``uav_speed``. The iteration lasts as long
as the longest leg; agents that arrive early hover. Contact with the source
is checked continuously along the legs, so a fly-by counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import algorithms as alg
from .core import (
    AlgorithmParams,
    RestrictedRandomMotion,
    SearchSpace,
    SourceModel,
    UavState,
    Variant,
    clamp_to_space,
    perimeter_point,
)
from .sensor import SensorConfig, measure
from .stability import effective_gain, jury_check
from .topology import TopologyGraph, TopologyKind, best_in, neighbors

SOURCE_DT = 0.1
DIVERGENCE_FACTOR = 1e6


class UnstableParamsError(ValueError):
    """APSO parameters fail the stability check and ``allow_unstable`` is off."""

    def __init__(self, verdict):
        self.verdict = verdict
        names = ", ".join(c.value for c in verdict.failed_conditions)
        super().__init__(f"APSO parameters are not stable (failed: {names})")


@dataclass(frozen=True)
class ScenarioConfig:
    space: SearchSpace = field(default_factory=SearchSpace)
    n: int = 5
    algorithm: AlgorithmParams = field(default_factory=AlgorithmParams)
    topology: TopologyGraph = field(default_factory=TopologyGraph)
    source: SourceModel = field(default_factory=SourceModel)
    sensor: SensorConfig = field(default_factory=SensorConfig)
    uav_speed: float = 10.0
    termination_radius: float = 0.1
    max_iterations: int = 500
    seed: int = 0
    record_trajectories: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.topology.n != self.n:
            raise ValueError(f"topology is for n={self.topology.n}, scenario has n={self.n}")
        if not self.uav_speed > 0:
            raise ValueError("uav_speed must be > 0")
        if not self.termination_radius > 0:
            raise ValueError("termination_radius must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    def with_seed(self, seed: int) -> "ScenarioConfig":
        return replace(self, seed=int(seed))


@dataclass
class RunRecord:
    success: bool
    iterations: int
    seeking_time: float
    per_agent_distance: list
    seed: int
    diverged: bool = False
    trajectories: Optional[list] = None  # rows of (iter, agent, x, y, measured)

    @property
    def swarm_distance(self) -> float:
        return float(sum(self.per_agent_distance))


def check_params(params: AlgorithmParams):
    """Raise :class:`UnstableParamsError` for APSO settings outside the stable region."""
    if params.variant is not Variant.APSO or params.allow_unstable:
        return None
    verdict = jury_check(params.w1, params.w2, params.c1, params.c2, effective_gain(params.T))
    if not verdict.stable:
        raise UnstableParamsError(verdict)
    return verdict


# -- source motion ---------------------------------------------------------

@dataclass(frozen=True)
class SourcePath:
    """Source positions sampled at ``times``; linear in between, constant after the last."""

    times: np.ndarray
    positions: np.ndarray

    @classmethod
    def static(cls, p) -> "SourcePath":
        return cls(np.zeros(1), np.asarray(p, dtype=float).reshape(1, 2))

    def at(self, t: np.ndarray) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if len(self.times) == 1:
            return np.repeat(self.positions, len(t), axis=0)
        x = np.interp(t, self.times, self.positions[:, 0])
        y = np.interp(t, self.times, self.positions[:, 1])
        return np.column_stack([x, y])


def _walk(pos: np.ndarray, heading: float, dist: float, center: np.ndarray, radius: float):
    """Move ``dist`` along ``heading``, reflecting specularly off the circle."""
    d = np.array([math.cos(heading), math.sin(heading)])
    for _ in range(1000):
        if dist <= 0:
            break
        rel = pos - center
        b = float(rel @ d)
        cc = float(rel @ rel) - radius * radius
        s_exit = -b + math.sqrt(max(b * b - cc, 0.0))
        if dist <= s_exit:
            pos = pos + dist * d
            break
        pos = pos + max(s_exit, 0.0) * d
        dist -= max(s_exit, 0.0)
        normal = (pos - center) / radius
        d = d - 2.0 * float(d @ normal) * normal
        if float(d @ normal) >= 0:  # tangential graze
            d = -normal
    rel = pos - center
    r = math.hypot(*rel)
    if r > radius:
        pos = center + rel * (radius / r)
    return pos, math.atan2(d[1], d[0])


def trace_source(src: SourceModel, duration: float, rng: np.random.Generator,
                 dt: float = SOURCE_DT) -> tuple[SourceModel, SourcePath]:
    """Advance the source by ``duration`` seconds and return it with its sampled path."""
    m = src.motion
    if not isinstance(m, RestrictedRandomMotion) or m.speed == 0 or duration <= 0:
        return src, SourcePath.static(src.xy)
    center = np.asarray(m.center, dtype=float)
    pos = src.xy
    heading, clock = m.heading, m.clock
    n_samples = max(int(math.ceil(duration / dt - 1e-9)), 1)
    times = np.minimum(np.arange(n_samples + 1) * dt, duration)
    samples = [pos.copy()]
    for i in range(n_samples):
        left = times[i + 1] - times[i]
        while left > 1e-15:
            if heading is None or clock >= m.redraw_interval - 1e-12:
                heading = float(rng.uniform(0.0, 2.0 * math.pi))
                clock = 0.0
            chunk = min(left, m.redraw_interval - clock)
            pos, heading = _walk(pos, heading, m.speed * chunk, center, m.radius)
            clock += chunk
            left -= chunk
        samples.append(pos.copy())
    new_motion = replace(m, heading=heading, clock=clock)
    new_src = replace(src, position=(float(pos[0]), float(pos[1])), motion=new_motion)
    return new_src, SourcePath(times, np.array(samples))


def move_source(src: SourceModel, duration: float, rng: np.random.Generator) -> SourceModel:
    if not isinstance(src.motion, RestrictedRandomMotion):
        raise ValueError("move_source needs a RestrictedRandom source")
    return trace_source(src, duration, rng)[0]


# -- contact geometry --------------------------------------------------------

def _leg_breakpoints(p_start, p_end, speed, path: SourcePath, horizon: Optional[float]):
    length = float(np.hypot(*(p_end - p_start)))
    arrive = length / speed
    end = arrive if horizon is None else max(horizon, arrive)
    ts = [0.0, arrive, end]
    if len(path.times) > 1:
        ts.extend(path.times[path.times < end])
    ts = np.unique(np.clip(ts, 0.0, end))
    frac = np.minimum(ts / arrive, 1.0) if arrive > 0 else np.ones_like(ts)
    agent = p_start + frac[:, None] * (p_end - p_start)
    return ts, agent - path.at(ts)


def first_contact(p_start, p_end, speed: float, path: SourcePath, radius: float,
                  horizon: Optional[float] = None) -> Optional[float]:
    """Earliest time within ``[0, horizon]`` at which the agent is within ``radius``
    of the source, or None. The agent hovers at ``p_end`` after arriving."""
    ts, rel = _leg_breakpoints(np.asarray(p_start, float), np.asarray(p_end, float), speed, path, horizon)
    r2 = radius * radius
    if rel[0] @ rel[0] <= r2:
        return 0.0
    for i in range(len(ts) - 1):
        span = ts[i + 1] - ts[i]
        if span <= 0:
            continue
        q0, dq = rel[i], rel[i + 1] - rel[i]
        a = dq @ dq
        b = q0 @ dq
        c = q0 @ q0 - r2
        if a == 0:
            continue
        disc = b * b - a * c
        if disc < 0:
            continue
        s = (-b - math.sqrt(disc)) / a
        if 0.0 <= s <= 1.0:
            return float(ts[i] + s * span)
    return None


def segment_source_distance(p_start, p_end, source_path, speed: float = 10.0) -> float:
    """Closest approach between the agent's leg and the source.

    ``source_path`` is either a fixed point or a :class:`SourcePath`; in the
    latter case the agent is taken to fly the leg at ``speed`` from t = 0.
    """
    if not isinstance(source_path, SourcePath):
        source_path = SourcePath.static(source_path)
    p0, p1 = np.asarray(p_start, float), np.asarray(p_end, float)
    ts, rel = _leg_breakpoints(p0, p1, speed, source_path, float(source_path.times[-1]))
    best = float(np.min(np.hypot(rel[:, 0], rel[:, 1])))
    for i in range(len(ts) - 1):
        q0, dq = rel[i], rel[i + 1] - rel[i]
        a = dq @ dq
        if a == 0:
            continue
        s = min(max(-(q0 @ dq) / a, 0.0), 1.0)
        best = min(best, float(np.hypot(*(q0 + s * dq))))
    return best


# -- episode -----------------------------------------------------------------

def _streams(seed: int):
    ss = np.random.SeedSequence(int(seed))
    return [np.random.default_rng(s) for s in ss.spawn(5)]


def initial_positions(cfg: ScenarioConfig, rng: np.random.Generator) -> list:
    return [perimeter_point(cfg.space, float(u)) for u in rng.uniform(0.0, 1.0, size=cfg.n)]


def run_episode(cfg: ScenarioConfig) -> RunRecord:
    """Fly one seeded episode until contact with the source or the iteration cap."""
    params = cfg.algorithm
    check_params(params)
    init_rng, algo_rng, topo_rng, sensor_rng, source_rng = _streams(cfg.seed)
    n, space, speed = cfg.n, cfg.space, cfg.uav_speed
    limit = DIVERGENCE_FACTOR * space.side_length
    src = cfg.source
    traj = [] if cfg.record_trajectories else None

    positions = initial_positions(cfg, init_rng)
    states = [UavState.at_rest(p, -math.inf) for p in positions]
    distance = np.zeros(n)
    elapsed = 0.0

    def record(success, iterations, diverged=False):
        return RunRecord(success, iterations, elapsed, [float(d) for d in distance],
                         cfg.seed, diverged, traj)

    still = SourcePath.static(src.xy)
    if any(first_contact(s.position, s.position, speed, still, cfg.termination_radius) == 0.0
           for s in states):
        return record(True, 0)

    stepper = alg.STEPPERS[params.variant]
    for k in range(1, cfg.max_iterations + 1):
        measured = [measure(src, s.position, cfg.sensor, sensor_rng) for s in states]
        states = [alg.update_personal_best(s, m) for s, m in zip(states, measured)]
        if traj is not None:
            traj.extend((k - 1, i, float(s.position[0]), float(s.position[1]), float(m))
                        for i, (s, m) in enumerate(zip(states, measured)))
        values = [s.best_value for s in states]

        stepped = []
        for i, s in enumerate(states):
            members = [i, *neighbors(cfg.topology, i, topo_rng)]
            lb = states[best_in(members, values)].best_position
            if params.variant is Variant.ARPSO:
                inertia = alg.ArpsoInertiaState.from_fitness(
                    s.best_value, max(values[j] for j in members), min(values[j] for j in members),
                    params.omega_min, params.omega_max)
                stepped.append(stepper(s, s.best_position, lb, inertia, params, algo_rng))
            else:
                stepped.append(stepper(s, s.best_position, lb, params, algo_rng))

        if any(np.max(np.abs(np.concatenate([s.position, s.velocity, s.acceleration]))) > limit
               for s in stepped):
            return record(False, k, diverged=True)

        starts = [s.position for s in states]
        ends = [clamp_to_space(s.position, space) for s in stepped]
        legs = np.array([float(np.hypot(*(e - p))) for p, e in zip(starts, ends)])
        duration = float(legs.max()) / speed
        new_src, path = trace_source(src, duration, source_rng)

        hits = [first_contact(p, e, speed, path, cfg.termination_radius, duration)
                for p, e in zip(starts, ends)]
        hits = [h for h in hits if h is not None]
        if hits:
            t_hit = min(hits)
            distance += np.minimum(legs, speed * t_hit)
            elapsed += t_hit
            return record(True, k)

        distance += legs
        elapsed += duration
        states = [s.evolve(position=e, distance=s.distance + d)
                  for s, e, d in zip(stepped, ends, legs)]
        src = new_src

    return record(False, cfg.max_iterations)


def default_scenario(**overrides) -> ScenarioConfig:
    """Reference setting: five agents, 100 m square, static central source, APSO, FC."""
    space = overrides.pop("space", SearchSpace())
    n = overrides.pop("n", 5)
    topo = overrides.pop("topology", TopologyGraph(TopologyKind.FC, n))
    src = overrides.pop("source", SourceModel(position=tuple(space.center)))
    return ScenarioConfig(space=space, n=n, topology=topo, source=src, **overrides)
