"""Per-agent waypoint update rules for PSO, SPSO, ARPSO and APSO.

Every rule acts on both axes at once with independent random gains per
axis. Pass ``gains`` to pin the random coefficients (tests, recurrence
checks); otherwise they are drawn from ``rng``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import AlgorithmParams, UavState, Variant


@dataclass(frozen=True)
class RandomGains:
    """Cognitive, social and attractive gains, each a per-axis array or scalar."""

    r1: np.ndarray
    r2: np.ndarray
    r3: np.ndarray = np.zeros(2)

    @classmethod
    def constant(cls, r1: float, r2: float, r3: float = 0.0) -> "RandomGains":
        return cls(np.full(2, float(r1)), np.full(2, float(r2)), np.full(2, float(r3)))


def draw_gains(params: AlgorithmParams, rng: np.random.Generator) -> RandomGains:
    r1 = rng.uniform(0.0, params.c1, size=2)
    r2 = rng.uniform(0.0, params.c2, size=2)
    r3 = rng.uniform(0.0, params.c3, size=2) if params.c3 > 0 else np.zeros(2)
    return RandomGains(r1, r2, r3)


@dataclass(frozen=True)
class ArpsoInertiaState:
    omega_i: float
    omega_min: float = 0.4
    omega_max: float = 0.9

    def __post_init__(self):
        if not self.omega_min <= self.omega_i <= self.omega_max:
            raise ValueError(
                f"omega_i={self.omega_i} outside [{self.omega_min}, {self.omega_max}]"
            )

    @classmethod
    def from_fitness(cls, f_i: float, f_best: float, f_worst: float,
                     omega_min: float = 0.4, omega_max: float = 0.9) -> "ArpsoInertiaState":
        """Linear rank rule: the best agent keeps ``omega_max``, the worst gets ``omega_min``."""
        span = f_best - f_worst
        if span <= 0:
            return cls(omega_max, omega_min, omega_max)
        frac = min(max((f_i - f_worst) / span, 0.0), 1.0)
        return cls(omega_min + (omega_max - omega_min) * frac, omega_min, omega_max)


def _gains(params, rng, gains):
    if gains is not None:
        return gains
    if rng is None:
        raise ValueError("either rng or gains must be given")
    return draw_gains(params, rng)


def _limit(v: np.ndarray, params: AlgorithmParams) -> np.ndarray:
    if params.v_max is None:
        return v
    return np.clip(v, -params.v_max, params.v_max)


def _pull(state: UavState, x_ib, x_b, g: RandomGains) -> np.ndarray:
    x = state.position
    return g.r1 * (np.asarray(x_ib) - x) + g.r2 * (np.asarray(x_b) - x)


def step_pso(state: UavState, x_ib, x_gb, params: AlgorithmParams,
             rng: Optional[np.random.Generator] = None,
             gains: Optional[RandomGains] = None) -> UavState:
    g = _gains(params, rng, gains)
    v = _limit(state.velocity + _pull(state, x_ib, x_gb, g), params)
    return state.evolve(position=state.position + v * params.T, velocity=v)


def step_spso(state: UavState, x_ib, x_lb, params: AlgorithmParams,
              rng: Optional[np.random.Generator] = None,
              gains: Optional[RandomGains] = None) -> UavState:
    g = _gains(params, rng, gains)
    v = _limit(params.omega * state.velocity + _pull(state, x_ib, x_lb, g), params)
    return state.evolve(position=state.position + v * params.T, velocity=v)


def step_arpso(state: UavState, x_ib, x_gb, inertia: ArpsoInertiaState,
               params: AlgorithmParams,
               rng: Optional[np.random.Generator] = None,
               gains: Optional[RandomGains] = None,
               x_a=None) -> UavState:
    """Velocity rule with a per-agent inertia; the attractive term is inert unless ``c3 > 0``."""
    g = _gains(params, rng, gains)
    v = inertia.omega_i * state.velocity + _pull(state, x_ib, x_gb, g)
    if x_a is not None:
        v = v + g.r3 * (np.asarray(x_a) - state.position)
    v = _limit(v, params)
    return state.evolve(position=state.position + v * params.T, velocity=v)


def step_apso(state: UavState, x_ib, x_gb, params: AlgorithmParams,
              rng: Optional[np.random.Generator] = None,
              gains: Optional[RandomGains] = None) -> UavState:
    """Acceleration-driven update, cascading a -> v -> x within the step."""
    g = _gains(params, rng, gains)
    a = params.w1 * state.acceleration + _pull(state, x_ib, x_gb, g)
    v = _limit(params.w2 * state.velocity + a * params.T, params)
    return state.evolve(position=state.position + v * params.T, velocity=v, acceleration=a)


def update_personal_best(state: UavState, measured: float) -> UavState:
    """Replace the personal best only on strict improvement."""
    if measured > state.best_value:
        return state.evolve(best_position=state.position.copy(), best_value=float(measured))
    return state


STEPPERS = {
    Variant.PSO: step_pso,
    Variant.SPSO: step_spso,
    Variant.ARPSO: step_arpso,
    Variant.APSO: step_apso,
}
