"""Run metrics and the Monte Carlo experiment grid."""
from __future__ import annotations

import itertools
import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import AlgorithmParams, RestrictedRandomMotion, SearchSpace, SourceModel, StaticMotion
from .engine import RunRecord, ScenarioConfig, check_params, run_episode
from .sensor import SensorConfig
from .topology import TopologyGraph

CSV_COLUMNS = ["algorithm", "topology", "area_side", "n", "source_speed", "noise", "N",
               "n_failures", "mu_I", "mu_Ts", "mu_SD", "sd_I", "sd_Ts", "sd_SD"]


@dataclass(frozen=True)
class MetricSummary:
    mean_iterations: float
    mean_seeking_time: float
    mean_swarm_distance: float
    n_runs: int
    n_failures: int
    sd_iterations: float
    sd_seeking_time: float
    sd_swarm_distance: float

    @property
    def n_success(self) -> int:
        return self.n_runs - self.n_failures

    @property
    def no_success(self) -> bool:
        return self.n_success == 0

    def stderr(self, metric: str) -> float:
        """Standard error of ``metric`` in {"I", "Ts", "SD"}."""
        sd = {"I": self.sd_iterations, "Ts": self.sd_seeking_time, "SD": self.sd_swarm_distance}[metric]
        return sd / math.sqrt(self.n_success) if self.n_success else math.nan

    def mean(self, metric: str) -> float:
        return {"I": self.mean_iterations, "Ts": self.mean_seeking_time,
                "SD": self.mean_swarm_distance}[metric]


def _mean_sd(xs: list) -> tuple:
    if not xs:
        return math.nan, math.nan
    m = math.fsum(xs) / len(xs)
    if len(xs) < 2:
        return m, 0.0
    return m, math.sqrt(math.fsum((x - m) ** 2 for x in xs) / (len(xs) - 1))


def summarize(records: Sequence[RunRecord]) -> MetricSummary:
    """Average the three metrics over successful runs; failures are only counted.

    With no successful run the means come back NaN and ``no_success`` is set.
    """
    if not records:
        raise ValueError("need at least one run record")
    ok = [r for r in records if r.success]
    mi, si = _mean_sd([float(r.iterations) for r in ok])
    mt, st = _mean_sd([r.seeking_time for r in ok])
    md, sd = _mean_sd([r.swarm_distance for r in ok])
    return MetricSummary(mi, mt, md, len(records), len(records) - len(ok), si, st, sd)


@dataclass(frozen=True)
class Cell:
    """One experiment condition. ``source_speed=None`` means a static source."""

    algorithm: str = "apso"
    topology: str = "fc"
    area_side: float = 100.0
    n: int = 5
    source_speed: Optional[float] = None
    noise: float = 0.0

    def key(self) -> str:
        """Identity of the condition, shared by every algorithm run under it."""
        return f"{self.topology}|{self.area_side!r}|{self.n}|{self.source_speed!r}|{self.noise!r}"


@dataclass(frozen=True)
class GridSpec:
    algorithm: tuple = ("apso",)
    topology: tuple = ("fc",)
    area_side: tuple = (100.0,)
    n: tuple = (5,)
    source_speed: tuple = (None,)
    noise: tuple = (0.0,)

    def cells(self) -> list:
        axes = (self.algorithm, self.topology, self.area_side, self.n, self.source_speed, self.noise)
        return [Cell(*combo) for combo in itertools.product(*axes)]


def build_scenario(cell: Cell, base: ScenarioConfig, motion_radius: float = 4.0) -> ScenarioConfig:
    """Apply ``cell`` to ``base``: the source sits at the centre of a square of ``area_side``."""
    space = SearchSpace(float(cell.area_side), base.space.origin)
    center = tuple(float(c) for c in space.center)
    if cell.source_speed is None:
        motion = StaticMotion()
    else:
        motion = RestrictedRandomMotion(radius=motion_radius, speed=float(cell.source_speed), center=center)
    source = replace(base.source, position=center, motion=motion)
    params = replace(base.algorithm, variant=cell.algorithm)
    topo = TopologyGraph(cell.topology, int(cell.n), base.topology.k)
    return replace(base, space=space, n=int(cell.n), algorithm=params, topology=topo,
                   source=source, sensor=SensorConfig(float(cell.noise)))


def run_seed(master_seed: int, cell: Cell, run: int) -> int:
    """64-bit episode seed from the master seed, the condition and the run index.

    The algorithm is left out of the condition key so that competing
    algorithms start from identical placements (common random numbers).
    """
    tag = zlib.crc32(cell.key().encode())
    words = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, tag, int(run)]).generate_state(2)
    return int(words[0]) << 32 | int(words[1])


def run_cell(cell: Cell, base: ScenarioConfig, N: int, master_seed: int,
             jobs: int = 1, motion_radius: float = 4.0) -> tuple:
    """Run ``N`` seeded episodes of one cell; returns ``(summary, error)``."""
    try:
        scenario = build_scenario(cell, base, motion_radius)
        check_params(scenario.algorithm)
        cfgs = [scenario.with_seed(run_seed(master_seed, cell, r)) for r in range(N)]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                records = list(pool.map(run_episode, cfgs, chunksize=max(1, N // (4 * jobs))))
        else:
            records = [run_episode(c) for c in cfgs]
    except Exception as exc:  # a broken cell must not abort the grid
        return None, f"{type(exc).__name__}: {exc}"
    return summarize(records), None


@dataclass(frozen=True)
class ExperimentRow:
    cell: Cell
    summary: Optional[MetricSummary]
    error: Optional[str] = None

    def as_dict(self) -> dict:
        s = self.summary
        speed = self.cell.source_speed
        row = {
            "algorithm": self.cell.algorithm,
            "topology": self.cell.topology,
            "area_side": float(self.cell.area_side),
            "n": int(self.cell.n),
            "source_speed": "" if speed is None else float(speed),
            "noise": float(self.cell.noise),
        }
        if s is None:
            row.update({k: "" for k in CSV_COLUMNS[6:]})
            row["error"] = self.error
            return row
        row.update({
            "N": s.n_runs, "n_failures": s.n_failures,
            "mu_I": s.mean_iterations, "mu_Ts": s.mean_seeking_time, "mu_SD": s.mean_swarm_distance,
            "sd_I": s.sd_iterations, "sd_Ts": s.sd_seeking_time, "sd_SD": s.sd_swarm_distance,
        })
        return row


def run_experiment(grid: GridSpec | Iterable[Cell], N: int, master_seed: int,
                   base: Optional[ScenarioConfig] = None, jobs: int = 1,
                   motion_radius: float = 4.0, progress=None) -> list:
    """One :class:`ExperimentRow` per cell; a cell that cannot run carries its error."""
    if N < 1:
        raise ValueError("N must be >= 1")
    base = base or ScenarioConfig()
    cells = grid.cells() if isinstance(grid, GridSpec) else list(grid)
    rows = []
    for cell in cells:
        summary, err = run_cell(cell, base, N, master_seed, jobs, motion_radius)
        rows.append(ExperimentRow(cell, summary, err))
        if progress is not None:
            progress(rows[-1])
    return rows


def find(rows: Sequence[ExperimentRow], **match) -> ExperimentRow:
    """The single row whose cell matches every given field."""
    hits = [r for r in rows if all(getattr(r.cell, k) == v for k, v in match.items())]
    if len(hits) != 1:
        raise LookupError(f"{len(hits)} rows match {match}")
    return hits[0]


def summary_dict(s: MetricSummary) -> dict:
    return asdict(s)
