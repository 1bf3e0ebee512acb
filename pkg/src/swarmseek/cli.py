"""``swarmseek`` command line: run | experiment | stability | replay."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .engine import RunRecord, UnstableParamsError, run_episode
from .metrics import CSV_COLUMNS, run_experiment
from .stability import jury_check, stability_grid

log = logging.getLogger("swarmseek")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNSTABLE = 3
EXIT_NO_SUCCESS = 4
EXIT_MISMATCH = 5

TRAJ_COLUMNS = ["run", "iter", "agent", "x", "y", "measured"]


class ReplayMismatch(Exception):
    def __init__(self, message: str, iteration=None):
        super().__init__(message)
        self.iteration = iteration


# -- run records ---------------------------------------------------------------

def record_to_json(rec: RunRecord, flat: dict) -> dict:
    return {
        "seed": rec.seed,
        "config": {k: v for k, v in flat.items() if v is not None},
        "config_digest": cfgmod.digest(flat),
        "success": rec.success,
        "iterations": rec.iterations,
        "seeking_time": rec.seeking_time,
        "per_agent_distance": rec.per_agent_distance,
        "diverged": rec.diverged,
        "trajectories": [list(row) for row in rec.trajectories or []],
    }


def _first_difference(a: list, b: list):
    for ra, rb in zip(a, b):
        if tuple(ra) != tuple(rb):
            return int(ra[0])
    if len(a) != len(b):
        shorter = a if len(a) < len(b) else b
        return int(shorter[-1][0]) + 1 if shorter else 0
    return None


def replay(record_path, config_path=None, overrides=()) -> RunRecord:
    """Re-run an archived episode and demand a bit-identical trajectory.

    The archived config is used unless ``config_path`` is given, in which case
    that config must carry the same digest as the record.
    """
    data = json.loads(Path(record_path).read_text())
    stored = dict(cfgmod.DEFAULTS)
    stored.update(data["config"])
    if config_path is not None or overrides:
        flat = cfgmod.load_flat(config_path, overrides)
    else:
        flat = stored
    if cfgmod.digest(flat) != data["config_digest"]:
        raise ReplayMismatch("config digest mismatch: the record was produced by a different scenario")
    flat = dict(flat, seed=int(data["seed"]), record_trajectories=True)
    rec = run_episode(cfgmod.scenario_from_flat(flat, check_stability=not flat["allow_unstable"]))
    fresh = [list(r) for r in rec.trajectories]
    where = _first_difference(data["trajectories"], fresh)
    if where is not None:
        raise ReplayMismatch(f"trajectory diverges at iteration {where}", where)
    if (rec.success, rec.iterations, rec.seeking_time, rec.per_agent_distance) != (
            data["success"], data["iterations"], data["seeking_time"], data["per_agent_distance"]):
        raise ReplayMismatch("outcome differs from the archived record", rec.iterations)
    return rec


# -- output helpers --------------------------------------------------------------

def write_rows(path: Path, columns: list, rows: list):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: _fmt(row.get(k, "")) for k in columns})


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _outdir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


# -- subcommands -----------------------------------------------------------------

def cmd_run(args) -> int:
    overrides = list(args.set)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    flat = cfgmod.load_flat(args.config, overrides)
    flat["record_trajectories"] = True
    cfg = cfgmod.scenario_from_flat(flat)
    rec = run_episode(cfg)
    out = _outdir(args.out)
    data = record_to_json(rec, flat)
    (out / "run.json").write_text(json.dumps(data, indent=1))
    (out / "config.cfg").write_text(cfgmod.dump_flat(flat))
    traj = [dict(zip(TRAJ_COLUMNS, [0, *row])) for row in rec.trajectories]
    write_rows(out / "trajectories.csv", TRAJ_COLUMNS, traj)
    summary = {k: data[k] for k in ("seed", "success", "iterations", "seeking_time")}
    summary["swarm_distance"] = rec.swarm_distance
    if args.format == "json":
        (out / "summary.json").write_text(json.dumps(summary, indent=1))
    else:
        write_rows(out / "summary.csv", list(summary), [summary])
    print(json.dumps(summary))
    return EXIT_OK if rec.success else EXIT_NO_SUCCESS


def cmd_experiment(args) -> int:
    overrides = list(args.set)
    if args.seed is not None:
        overrides.append(f"experiment.master_seed={args.seed}")
    flat = cfgmod.load_flat(args.config, overrides)
    exp = cfgmod.experiment_from_flat(flat)
    out = _outdir(args.out)
    (out / "config.cfg").write_text(cfgmod.dump_flat(flat))

    def progress(row):
        log.info("%s", row.as_dict())

    rows = run_experiment(exp.grid, exp.N, exp.master_seed, exp.base, jobs=args.jobs,
                          motion_radius=exp.motion_radius, progress=progress)
    dicts = [r.as_dict() for r in rows]
    if args.format == "json":
        (out / "summary.json").write_text(json.dumps(dicts, indent=1))
    else:
        write_rows(out / "summary.csv", CSV_COLUMNS, dicts)
    for r in rows:
        if r.error:
            print(f"cell {r.cell} failed: {r.error}", file=sys.stderr)
    if any(r.summary is None or r.summary.no_success for r in rows):
        return EXIT_NO_SUCCESS
    return EXIT_OK


def cmd_stability(args) -> int:
    v = jury_check(args.w1, args.w2, args.c1, args.c2, args.T)
    print(f"w1={args.w1} w2={args.w2} c1={args.c1} c2={args.c2} T={args.T}")
    for cond, cv in v.conditions.items():
        print(f"  {cond.value}: {cv.lhs:.9g} vs {cv.rhs:.9g} -> {'ok' if cv.holds else 'FAIL'}")
    for side, mags in v.extreme_roots.items():
        print(f"  {side} extreme |roots|: " + ", ".join(f"{m:.9g}" for m in mags))
    if v.disagreement:
        print("  WARNING: closed-form and root checks disagree")
    print("stable" if v.stable else "unstable: " + ", ".join(c.value for c in v.failed_conditions))
    if args.grid:
        out = _outdir(args.out)
        axis = np.linspace(args.grid_min, args.grid_max, args.grid_steps)
        rows = [{"w1": w1, "w2": w2, "stable": int(ok), "failed": ";".join(f)}
                for w1, w2, ok, f in stability_grid(axis, axis, args.c1, args.c2, args.T)]
        write_rows(out / "stability_grid.csv", ["w1", "w2", "stable", "failed"], rows)
        print(f"wrote {out / 'stability_grid.csv'}")
    return EXIT_OK if v.stable else EXIT_UNSTABLE


def cmd_replay(args) -> int:
    try:
        rec = replay(args.record, args.config, args.set)
    except ReplayMismatch as exc:
        print(f"mismatch: {exc}")
        return EXIT_MISMATCH
    print(f"match: seed={rec.seed} iterations={rec.iterations} success={rec.success}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swarmseek", description="Swarm source-seeking simulator")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="config file or preset name")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out", default="out")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--jobs", type=int, default=1)

    common(sub.add_parser("run", help="one episode"))
    common(sub.add_parser("experiment", help="Monte Carlo grid"))

    st = sub.add_parser("stability", help="Jury check of APSO parameters")
    st.add_argument("--w1", type=float, default=0.675)
    st.add_argument("--w2", type=float, default=-0.285)
    st.add_argument("--c1", type=float, default=1.193)
    st.add_argument("--c2", type=float, default=1.193)
    st.add_argument("--T", type=float, default=1.0)
    st.add_argument("--grid", action="store_true", help="also sweep a (w1, w2) lattice")
    st.add_argument("--grid-min", type=float, default=-1.5)
    st.add_argument("--grid-max", type=float, default=1.5)
    st.add_argument("--grid-steps", type=int, default=61)
    st.add_argument("--out", default="out")

    rp = sub.add_parser("replay", help="verify an archived run.json")
    rp.add_argument("record")
    rp.add_argument("--config")
    rp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    return p


COMMANDS = {"run": cmd_run, "experiment": cmd_experiment,
            "stability": cmd_stability, "replay": cmd_replay}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UnstableParamsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except cfgmod.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
