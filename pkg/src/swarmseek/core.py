"""Shared domain types: search space, agent state, source, algorithm parameters."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np


def vec2(x: float, y: float) -> np.ndarray:
    return np.array([float(x), float(y)], dtype=float)


class Variant(str, enum.Enum):
    PSO = "pso"
    SPSO = "spso"
    ARPSO = "arpso"
    APSO = "apso"


@dataclass(frozen=True)
class SearchSpace:
    """Axis-aligned square region ``[ox, ox + side] x [oy, oy + side]``."""

    side_length: float = 100.0
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not (self.side_length > 0 and math.isfinite(self.side_length)):
            raise ValueError(f"side_length must be positive, got {self.side_length}")

    @property
    def lower(self) -> np.ndarray:
        return np.asarray(self.origin, dtype=float)

    @property
    def upper(self) -> np.ndarray:
        return self.lower + self.side_length

    @property
    def center(self) -> np.ndarray:
        return self.lower + 0.5 * self.side_length


def clamp_to_space(p, space: SearchSpace) -> np.ndarray:
    """Per-axis clamp of ``p`` into ``space``; interior points come back unchanged."""
    return np.minimum(np.maximum(np.asarray(p, dtype=float), space.lower), space.upper)


def perimeter_point(space: SearchSpace, u: float) -> np.ndarray:
    """Map ``u`` in [0, 1) onto the boundary by arc length.

    Traversal starts at the origin corner and runs counter-clockwise:
    bottom edge, right edge, top edge, left edge.
    """
    if not 0.0 <= u < 1.0:
        raise ValueError(f"u must lie in [0, 1), got {u}")
    side = space.side_length
    s = 4.0 * side * u
    edge = min(int(s // side), 3)
    t = s - edge * side
    ox, oy = space.origin
    if edge == 0:
        return vec2(ox + t, oy)
    if edge == 1:
        return vec2(ox + side, oy + t)
    if edge == 2:
        return vec2(ox + side - t, oy + side)
    return vec2(ox, oy + side - t)


@dataclass(frozen=True)
class UavState:
    """Kinematic state of one agent plus its personal-best record."""

    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    best_position: np.ndarray
    best_value: float
    distance: float = 0.0

    @classmethod
    def at_rest(cls, position, measured: float) -> "UavState":
        p = np.asarray(position, dtype=float).copy()
        return cls(p, np.zeros(2), np.zeros(2), p.copy(), float(measured), 0.0)

    def evolve(self, **changes) -> "UavState":
        return replace(self, **changes)


@dataclass(frozen=True)
class AlgorithmParams:
    variant: Variant = Variant.APSO
    w1: float = 0.675
    w2: float = -0.285
    omega: float = 0.721
    c1: float = 1.193
    c2: float = 1.193
    c3: float = 0.0
    T: float = 1.0
    omega_min: float = 0.4
    omega_max: float = 0.9
    v_max: Optional[float] = None
    allow_unstable: bool = False

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if not self.c1 > 0:
            raise ValueError("c1 must be > 0")
        if not self.c2 > 0:
            raise ValueError("c2 must be > 0")
        if not self.c3 >= 0:
            raise ValueError("c3 must be >= 0")
        if not self.T > 0:
            raise ValueError("T must be > 0")
        if not self.omega_min <= self.omega_max:
            raise ValueError("omega_min must not exceed omega_max")
        if self.v_max is not None and not self.v_max > 0:
            raise ValueError("v_max must be > 0 when set")

    @classmethod
    def defaults(cls, variant: Union[Variant, str]) -> "AlgorithmParams":
        return cls(variant=Variant(variant))


@dataclass(frozen=True)
class StaticMotion:
    pass


@dataclass(frozen=True)
class RestrictedRandomMotion:
    """Random walk at constant speed inside a disc, reflecting at its rim.

    ``heading`` and ``clock`` carry the walk between calls: the heading is
    re-drawn whenever ``clock`` (seconds since the last draw) reaches
    ``redraw_interval``. ``heading=None`` forces a draw on the next move.
    """

    radius: float = 4.0
    speed: float = 0.0
    center: tuple[float, float] = (0.0, 0.0)
    redraw_interval: float = 1.0
    heading: Optional[float] = None
    clock: float = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be > 0")
        if not self.speed >= 0:
            raise ValueError("speed must be >= 0")
        if not self.redraw_interval > 0:
            raise ValueError("redraw_interval must be > 0")


Motion = Union[StaticMotion, RestrictedRandomMotion]


@dataclass(frozen=True)
class SourceModel:
    position: tuple[float, float] = (50.0, 50.0)
    power: float = 100.0
    alpha: float = 0.001
    motion: Motion = field(default_factory=StaticMotion)

    def __post_init__(self):
        if not self.power > 0:
            raise ValueError("source power must be > 0")
        if not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        object.__setattr__(self, "position", (float(self.position[0]), float(self.position[1])))
        if isinstance(self.motion, RestrictedRandomMotion):
            off = math.dist(self.position, self.motion.center)
            if off > self.motion.radius * (1 + 1e-12):
                raise ValueError("source starts outside its motion circle")

    @property
    def xy(self) -> np.ndarray:
        return np.asarray(self.position, dtype=float)
