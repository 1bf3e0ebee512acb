"""Received signal strength with power-proportional Gaussian noise."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SourceModel


@dataclass(frozen=True)
class SensorConfig:
    noise_fraction: float = 0.0

    def __post_init__(self):
        if not self.noise_fraction >= 0:
            raise ValueError("noise_fraction must be >= 0")


def noiseless_power(source: SourceModel, agent_pos) -> float:
    d2 = float(np.sum((np.asarray(agent_pos, dtype=float) - source.xy) ** 2))
    return source.power * math.exp(-source.alpha * d2)


def measure(source: SourceModel, agent_pos, cfg: SensorConfig, rng: np.random.Generator) -> float:
    """Signal power seen at ``agent_pos``.

    The noise standard deviation is ``noise_fraction`` times the noiseless
    power. Nothing is clamped, so heavy noise can produce negative readings.
    With ``noise_fraction == 0`` no random numbers are consumed.
    """
    s = noiseless_power(source, agent_pos)
    if cfg.noise_fraction == 0:
        return s
    return s + float(rng.normal(0.0, cfg.noise_fraction * s))
