"""Particle-swarm source seeking (PSO, SPSO, ARPSO, APSO) with stability analysis."""
from .core import (
    AlgorithmParams,
    RestrictedRandomMotion,
    SearchSpace,
    SourceModel,
    StaticMotion,
    UavState,
    Variant,
    clamp_to_space,
    perimeter_point,
)
from .engine import RunRecord, ScenarioConfig, default_scenario, run_episode
from .metrics import Cell, GridSpec, MetricSummary, run_experiment, summarize
from .sensor import SensorConfig, measure
from .stability import coeffs_from_params, jury_check, root_magnitudes, simulate_recurrence, steady_state
from .topology import TopologyGraph, TopologyKind, local_best, neighbors

__version__ = "0.1.0"
