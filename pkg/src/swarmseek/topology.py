"""Communication topologies deciding whose best position an agent can see."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


class TopologyKind(str, enum.Enum):
    FC = "fc"
    RING = "ring"
    ADAPTIVE = "adaptive"


@dataclass(frozen=True)
class TopologyGraph:
    kind: TopologyKind = TopologyKind.FC
    n: int = 5
    k: int = 2  # adaptive degree

    def __post_init__(self):
        object.__setattr__(self, "kind", TopologyKind(self.kind))
        if self.n < 2:
            raise ValueError(f"swarm size must be >= 2, got {self.n}")
        if self.kind is TopologyKind.ADAPTIVE and not 1 <= self.k <= self.n - 1:
            raise ValueError(f"adaptive degree k must be in [1, {self.n - 1}], got {self.k}")

    @property
    def uses_rng(self) -> bool:
        return self.kind is TopologyKind.ADAPTIVE


def neighbors(g: TopologyGraph, agent: int, rng: Optional[np.random.Generator] = None) -> list[int]:
    """Indices ``agent`` hears from this iteration, excluding itself, ascending."""
    if not 0 <= agent < g.n:
        raise IndexError(f"agent {agent} out of range for n={g.n}")
    if g.kind is TopologyKind.FC:
        return [j for j in range(g.n) if j != agent]
    if g.kind is TopologyKind.RING:
        return sorted({(agent - 1) % g.n, (agent + 1) % g.n})
    if rng is None:
        raise ValueError("adaptive topology needs a random stream")
    others = [j for j in range(g.n) if j != agent]
    picked = rng.choice(len(others), size=g.k, replace=False)
    return sorted(others[i] for i in picked)


def best_in(members: Sequence[int], values: Sequence[float]) -> int:
    """Index with the largest value; ties go to the lowest index."""
    best = min(members)
    for j in sorted(members):
        if values[j] > values[best]:
            best = j
    return best


def local_best(g: TopologyGraph, agent: int, bests, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Best recorded position among ``agent`` and its current neighbours.

    ``bests`` is a sequence of ``(position, value)`` pairs, one per agent.
    """
    if len(bests) != g.n:
        raise ValueError(f"expected {g.n} best records, got {len(bests)}")
    members = [agent, *neighbors(g, agent, rng)]
    values = [b[1] for b in bests]
    return np.asarray(bests[best_in(members, values)][0], dtype=float)
