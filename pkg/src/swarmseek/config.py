"""Declarative scenario / experiment configuration with flat dotted keys.

Config files are TOML. Keys may be written flat (``params.w1 = 0.7``) or as
tables; either way they are flattened to dotted names and checked against
:data:`DEFAULTS`. Unknown keys are errors.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import tomli

from .core import AlgorithmParams, RestrictedRandomMotion, SearchSpace, SourceModel, StaticMotion
from .engine import ScenarioConfig, check_params
from .metrics import GridSpec
from .sensor import SensorConfig
from .topology import TopologyGraph

DEFAULT_MASTER_SEED = 20220611

DEFAULTS: dict = {
    "algorithm": "apso",
    "topology": "fc",
    "topology_k": 2,
    "n": 5,
    "space.side_length": 100.0,
    "space.origin": [0.0, 0.0],
    "source.position": None,  # None: centre of the space
    "source.power": 100.0,
    "source.alpha": 0.001,
    "source.motion": "static",
    "source.radius": 4.0,
    "source.speed": 0.0,
    "sensor.noise_fraction": 0.0,
    "uav_speed": 10.0,
    "termination_radius": 0.1,
    "max_iterations": 500,
    "seed": 0,
    "record_trajectories": False,
    "allow_unstable": False,
    "params.w1": 0.675,
    "params.w2": -0.285,
    "params.omega": 0.721,
    "params.c1": 1.193,
    "params.c2": 1.193,
    "params.c3": 0.0,
    "params.T": 1.0,
    "params.omega_min": 0.4,
    "params.omega_max": 0.9,
    "params.v_max": None,
    "experiment.N": 1000,
    "experiment.master_seed": DEFAULT_MASTER_SEED,
    "grid.algorithm": None,
    "grid.topology": None,
    "grid.area_side": None,
    "grid.n": None,
    "grid.source_speed": None,
    "grid.noise": None,
}

# keys that do not change what an episode computes
_NOT_DIGESTED = {"seed", "record_trajectories"}
_GRID_AXES = ("algorithm", "topology", "area_side", "n", "source_speed", "noise")


class ConfigError(ValueError):
    pass


def _flatten(tree: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in tree.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


def parse_text(text: str, origin: str = "<config>") -> dict:
    try:
        tree = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:  # message carries "(at line L, column C)"
        raise ConfigError(f"{origin}: parse error: {exc}") from None
    return _flatten(tree)


def parse_override(item: str) -> tuple:
    """``key=value`` with a TOML-typed value; bare words are taken as strings."""
    if "=" not in item:
        raise ConfigError(f"override {item!r} is not key=value")
    key, raw = (s.strip() for s in item.split("=", 1))
    try:
        value = tomli.loads(f"v = {raw}")["v"]
    except tomli.TOMLDecodeError:
        value = raw
    return key, value


def preset_path(name: str) -> Path:
    """Resolve a shipped preset by bare name (``table1_fc`` or ``table1_fc.cfg``)."""
    fname = name if name.endswith(".cfg") else f"{name}.cfg"
    return Path(str(resources.files("swarmseek") / "presets" / fname))


def list_presets() -> list:
    root = resources.files("swarmseek") / "presets"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".cfg"))


def load_flat(path: Optional[str] = None, overrides: Sequence[str] = ()) -> dict:
    """Merged flat key map: defaults, then the file, then ``key=value`` overrides."""
    flat = dict(DEFAULTS)
    if path is not None:
        p = Path(path)
        if not p.exists() and not p.suffix and preset_path(path).exists():
            p = preset_path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {path}")
        flat.update(_checked(parse_text(p.read_text(), str(p))))
    flat.update(_checked(dict(parse_override(o) for o in overrides)))
    return flat


def _checked(entries: dict) -> dict:
    for key in entries:
        if key not in DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}")
    return entries


def _num(flat, key, kind=float):
    v = flat[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{key} must be a number, got {v!r}")
    if kind is int:
        if isinstance(v, float) and not v.is_integer():
            raise ConfigError(f"{key} must be an integer, got {v!r}")
        return int(v)
    return float(v)


def _seed(flat, key):
    v = _num(flat, key, int)
    if not 0 <= v < 2**64:
        raise ConfigError(f"{key} must be a 64-bit unsigned integer, got {v!r}")
    return v


def _pair(flat, key):
    v = flat[key]
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v)):
        raise ConfigError(f"{key} must be a two-number list, got {v!r}")
    return float(v[0]), float(v[1])


def scenario_from_flat(flat: dict, check_stability: bool = True) -> ScenarioConfig:
    """Build and validate a :class:`ScenarioConfig`; grid/experiment keys are ignored here."""
    try:
        space = SearchSpace(_num(flat, "space.side_length"), _pair(flat, "space.origin"))
        n = _num(flat, "n", int)
        center = tuple(float(c) for c in space.center)
        pos = center if flat["source.position"] is None else _pair(flat, "source.position")
        kind = flat["source.motion"]
        if kind == "static":
            motion = StaticMotion()
        elif kind == "restricted_random":
            motion = RestrictedRandomMotion(radius=_num(flat, "source.radius"),
                                            speed=_num(flat, "source.speed"), center=pos)
        else:
            raise ConfigError(f"source.motion must be 'static' or 'restricted_random', got {kind!r}")
        source = SourceModel(pos, _num(flat, "source.power"), _num(flat, "source.alpha"), motion)
        vmax = flat["params.v_max"]
        params = AlgorithmParams(
            variant=flat["algorithm"],
            w1=_num(flat, "params.w1"), w2=_num(flat, "params.w2"),
            omega=_num(flat, "params.omega"),
            c1=_num(flat, "params.c1"), c2=_num(flat, "params.c2"), c3=_num(flat, "params.c3"),
            T=_num(flat, "params.T"),
            omega_min=_num(flat, "params.omega_min"), omega_max=_num(flat, "params.omega_max"),
            v_max=None if vmax is None else _num(flat, "params.v_max"),
            allow_unstable=bool(flat["allow_unstable"]),
        )
        topo = TopologyGraph(flat["topology"], n, _num(flat, "topology_k", int))
        cfg = ScenarioConfig(
            space=space, n=n, algorithm=params, topology=topo, source=source,
            sensor=SensorConfig(_num(flat, "sensor.noise_fraction")),
            uav_speed=_num(flat, "uav_speed"),
            termination_radius=_num(flat, "termination_radius"),
            max_iterations=_num(flat, "max_iterations", int),
            seed=_seed(flat, "seed"),
            record_trajectories=bool(flat["record_trajectories"]),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"invalid config: {exc}") from None
    if check_stability:
        check_params(params)
    return cfg


def load_config(path: Optional[str] = None, overrides: Sequence[str] = ()) -> ScenarioConfig:
    return scenario_from_flat(load_flat(path, overrides))


@dataclass(frozen=True)
class ExperimentConfig:
    base: ScenarioConfig
    grid: GridSpec
    N: int
    master_seed: int
    motion_radius: float


def experiment_from_flat(flat: dict) -> ExperimentConfig:
    """Grid axes default to the single value of the matching scenario key."""
    base = scenario_from_flat(flat, check_stability=False)
    single = {
        "algorithm": flat["algorithm"],
        "topology": flat["topology"],
        "area_side": flat["space.side_length"],
        "n": flat["n"],
        "source_speed": None if flat["source.motion"] == "static" else flat["source.speed"],
        "noise": flat["sensor.noise_fraction"],
    }
    axes = {}
    for axis in _GRID_AXES:
        values = flat[f"grid.{axis}"]
        if values is None:
            values = [single[axis]]
        if not isinstance(values, list) or not values:
            raise ConfigError(f"grid.{axis} must be a non-empty list")
        axes[axis] = tuple(values)
    N = _num(flat, "experiment.N", int)
    if N < 1:
        raise ConfigError("experiment.N must be >= 1")
    return ExperimentConfig(base, GridSpec(**axes), N,
                            _seed(flat, "experiment.master_seed"),
                            _num(flat, "source.radius"))


def load_experiment(path: Optional[str] = None, overrides: Sequence[str] = ()) -> ExperimentConfig:
    return experiment_from_flat(load_flat(path, overrides))


def dump_flat(flat: dict) -> str:
    """Config echo that :func:`parse_text` reads back to the same mapping."""
    lines = []
    for key in DEFAULTS:
        value = flat.get(key)
        if value is None:
            continue
        lines.append(f"{key} = {json.dumps(value)}")
    return "\n".join(lines) + "\n"


def digest(flat: dict) -> str:
    """Fingerprint of everything that shapes an episode except its seed."""
    body = {k: flat.get(k) for k in sorted(DEFAULTS)
            if k not in _NOT_DIGESTED and not k.startswith(("grid.", "experiment."))}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()
