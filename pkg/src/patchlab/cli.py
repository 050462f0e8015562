"""Configuration-driven experiment runner.

Usage:
    patchlab run <config.json>       execute an experiment
    patchlab validate <config.json>  parse and check a config, run nothing
    patchlab describe <snapshot.json>  summarize a saved snapshot

A config is a single JSON object selecting a pipeline kind, an initial
curve, simulation knobs, diagnostic grids, and an output directory. Every
pipeline writes manifest.json (resolved config, package versions, wall
time) followed by its data files; the data files are byte-identical across
repeated runs of the same config.

Exit codes: 0 on success, 2 on a configuration or file-format error, 3 on
a numerical failure during a run (reported with step and time context).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time as _time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, MalformedFile, PatchlabError
from .evolution import SimulationConfig, invariants, run
from .geometry import (
    CurveState,
    IntrinsicState,
    arc_chord_ratio,
    build_frame,
    circle,
    ellipse,
    reconstruct_curve,
)
from .hilbert import dispersion_group, hilbert
from .illposed import (
    DiagnosticsReport,
    IllposedDataSpec,
    build_illposed_data,
    forcing_terms,
    inflation_experiment,
)
from .norms import holder_seminorm
from .velocity import boundary_velocity
from . import storage

__all__ = ["ExperimentConfig", "load_config", "run_experiment", "main"]

_KINDS = ("simulate", "diagnose", "inflation", "compare_formulations", "hilbert_check")


@dataclasses.dataclass
class ExperimentConfig:
    """Resolved experiment description (see module docstring for the JSON)."""

    kind: str
    initial: dict
    simulation: SimulationConfig
    p_grid: list
    t_grid: list
    beta: list
    output_dir: Path
    seed: int = 0  # reserved; every pipeline is deterministic


def _cfg_get(doc: dict, key: str, default=None, required: bool = False):
    if key not in doc:
        if required:
            raise ConfigError(f"missing field {key!r}")
        return default
    return doc[key]


def load_config(path) -> ExperimentConfig:
    """Parse and validate a config file; raises ConfigError on any problem."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")

    kind = _cfg_get(doc, "kind", required=True)
    if kind not in _KINDS:
        raise ConfigError(f"field 'kind': unknown kind {kind!r}; expected one of {_KINDS}")

    initial = _cfg_get(doc, "initial", default={"type": "circle"})
    if not isinstance(initial, dict) or "type" not in initial:
        raise ConfigError("field 'initial': must be an object with a 'type'")
    itype = initial["type"]
    if itype not in ("circle", "ellipse", "illposed", "file"):
        raise ConfigError(f"field 'initial.type': unknown type {itype!r}")
    for key in ("radius", "a", "b", "base_radius", "blend_width"):
        if key in initial and not initial[key] > 0:
            raise ConfigError(f"field 'initial.{key}': must be positive")
    if itype == "file" and "path" not in initial:
        raise ConfigError("field 'initial.path': required for type 'file'")
    if itype != "file":
        n = initial.get("n_nodes", 256)
        if not (isinstance(n, int) and n >= 16 and n % 2 == 0):
            raise ConfigError("field 'initial.n_nodes': must be an even integer >= 16")

    sim_doc = _cfg_get(doc, "simulation", default={})
    if not isinstance(sim_doc, dict):
        raise ConfigError("field 'simulation': must be an object")
    known = {f.name for f in dataclasses.fields(SimulationConfig)}
    extra = set(sim_doc) - known
    if extra:
        raise ConfigError(f"field 'simulation': unknown keys {sorted(extra)}")
    try:
        sim = SimulationConfig(**sim_doc)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field 'simulation': {exc}") from exc

    diag = _cfg_get(doc, "diagnostics", default={})
    if not isinstance(diag, dict):
        raise ConfigError("field 'diagnostics': must be an object")
    p_grid = diag.get("p_grid", [64, 128, 256, 512, 1024])
    t_grid = diag.get("t_grid", [0.0, 0.25, 0.5, 0.75, 1.0])
    beta = diag.get("beta", [0.5])
    for name, grid in (("p_grid", p_grid), ("t_grid", t_grid), ("beta", beta)):
        if not isinstance(grid, list) or not grid:
            raise ConfigError(f"field 'diagnostics.{name}': must be a nonempty array")

    out = Path(_cfg_get(doc, "output_dir", default="."))
    seed = _cfg_get(doc, "seed", default=0)
    if not isinstance(seed, int):
        raise ConfigError("field 'seed': must be an integer")
    return ExperimentConfig(
        kind=kind,
        initial=initial,
        simulation=sim,
        p_grid=p_grid,
        t_grid=t_grid,
        beta=beta,
        output_dir=out,
        seed=seed,
    )


def _build_initial(initial: dict):
    itype = initial["type"]
    n = initial.get("n_nodes", 256)
    if itype == "circle":
        return circle(n, radius=initial.get("radius", 1.0))
    if itype == "ellipse":
        return ellipse(n, a=initial.get("a", 2.0), b=initial.get("b", 1.0))
    if itype == "illposed":
        spec = IllposedDataSpec(
            epsilon=initial.get("epsilon", 0.1),
            n_nodes=n,
            blend_width=initial.get("blend_width", 0.2),
            base_radius=initial.get("base_radius", 1.0),
        )
        return build_illposed_data(spec)[0]
    return storage.load_snapshot(initial["path"])


def _write_manifest(config: ExperimentConfig, wall_time: float) -> None:
    doc = {
        "config": {
            "kind": config.kind,
            "initial": config.initial,
            "simulation": dataclasses.asdict(config.simulation),
            "diagnostics": {
                "p_grid": config.p_grid,
                "t_grid": config.t_grid,
                "beta": config.beta,
            },
            "output_dir": str(config.output_dir),
            "seed": config.seed,
        },
        "versions": {
            "patchlab": __version__,
            "numpy": np.__version__,
            "python": sys.version.split()[0],
        },
        "wall_time_seconds": wall_time,
    }
    (config.output_dir / "manifest.json").write_text(
        json.dumps(doc, sort_keys=True, indent=2) + "\n"
    )


def _pipeline_simulate(config: ExperimentConfig) -> None:
    curve0 = _build_initial(config.initial)
    traj = run(config.simulation, curve0)
    out = config.output_dir
    for i, t in enumerate(traj.times):
        if traj.curves:
            storage.save_curve(traj.curves[i], out / f"snapshot_{i:06d}.json")
        else:
            storage.save_intrinsic(traj.intrinsics[i], out / f"snapshot_{i:06d}.json")
    storage.write_invariants_csv(traj.invariant_log, out / "invariants.csv")


def _pipeline_diagnose(config: ExperimentConfig) -> None:
    curve = _build_initial(config.initial)
    if isinstance(curve, IntrinsicState):
        curve = reconstruct_curve(curve)
    frame = build_frame(curve, tail_tol=config.simulation.tail_tol)
    bv = boundary_velocity(curve, frame)
    out = config.output_dir
    storage.write_velocity_csv(curve.grid.labels, bv, out / "velocity.csv")
    a, f_l, f_n = forcing_terms(curve, frame, bv)
    report = DiagnosticsReport(p_grid=[], t_grid=[curve.time])
    for name, field in (("a", a), ("F_L", f_l), ("F_N", f_n)):
        report.forcing_norms[name] = {
            "sup": float(np.max(np.abs(field))),
            **{
                f"holder_{b}": holder_seminorm(field, b) for b in config.beta
            },
        }
    storage.write_report_json(report, out / "report.json")


def _pipeline_inflation(config: ExperimentConfig) -> None:
    initial = dict(config.initial)
    if initial.get("type", "illposed") != "illposed":
        raise ConfigError("field 'initial.type': inflation requires 'illposed'")
    spec = IllposedDataSpec(
        epsilon=initial.get("epsilon", 0.1),
        n_nodes=initial.get("n_nodes", 8192),
        blend_width=initial.get("blend_width", 0.2),
        base_radius=initial.get("base_radius", 1.0),
    )
    dt = config.simulation.dt if config.simulation.dt != "auto" else None
    report = inflation_experiment(spec, config.t_grid, config.p_grid, dt=dt)
    out = config.output_dir
    storage.write_lp_table_csv(report, out / "lp_table.csv")
    storage.write_slopes_csv(report, out / "slopes.csv")
    storage.write_remainder_csv(report, out / "remainder.csv")
    storage.write_report_json(report, out / "report.json")


def _pipeline_compare(config: ExperimentConfig) -> None:
    curve0 = _build_initial(config.initial)
    sim = dataclasses.replace(config.simulation, formulation="both", resample_every=0)
    traj = run(sim, curve0)
    rows = []
    for i, t in enumerate(traj.times):
        kap_c = build_frame(traj.curves[i], check=False).kappa
        kap_i = traj.intrinsics[i].kappa
        rows.append([storage._fmt(t), storage._fmt(np.max(np.abs(kap_c - kap_i)))])
    storage._write_csv(config.output_dir / "comparison.csv", ("t", "max_dkappa"), rows)


def _pipeline_hilbert_check(config: ExperimentConfig) -> None:
    n = config.initial.get("n_nodes", 1024)
    xi = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    f = np.cos(3 * xi) + 0.5 * np.sin(7 * xi) + 0.1 * np.cos(11 * xi)
    tol = 1e-12
    checks = []

    def add(name, err):
        checks.append((name, err, tol, "pass" if err <= tol else "fail"))

    add("square_is_minus_identity", float(np.max(np.abs(hilbert(hilbert(f)) + f))))
    g1 = dispersion_group(dispersion_group(f, 0.3), 0.4)
    add("group_law", float(np.max(np.abs(g1 - dispersion_group(f, 0.7)))))
    add("half_turn_is_transform", float(np.max(np.abs(dispersion_group(f, 0.5) - hilbert(f)))))
    add("full_turn_is_minus_identity", float(np.max(np.abs(dispersion_group(f, 1.0) + f))))
    l2 = np.sqrt(np.mean(f * f))
    gt = dispersion_group(f, 0.37)
    add("isometry_l2", abs(float(np.sqrt(np.mean(gt * gt))) - l2))
    rows = [[name, storage._fmt(err), storage._fmt(t), status] for name, err, t, status in checks]
    storage._write_csv(
        config.output_dir / "hilbert_check.csv", ("check", "error", "tolerance", "status"), rows
    )
    if any(row[3] == "fail" for row in rows):
        raise PatchlabError("one or more transform identities failed")


_PIPELINES = {
    "simulate": _pipeline_simulate,
    "diagnose": _pipeline_diagnose,
    "inflation": _pipeline_inflation,
    "compare_formulations": _pipeline_compare,
    "hilbert_check": _pipeline_hilbert_check,
}


def run_experiment(config: ExperimentConfig) -> None:
    """Execute the configured pipeline, writing manifest and outputs."""
    config.output_dir.mkdir(parents=True, exist_ok=True)
    start = _time.monotonic()
    _PIPELINES[config.kind](config)
    _write_manifest(config, _time.monotonic() - start)


def _cmd_run(path: str) -> int:
    try:
        config = load_config(path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        run_experiment(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PatchlabError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


def _cmd_validate(path: str) -> int:
    try:
        config = load_config(path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    print(f"ok: kind={config.kind} initial={config.initial.get('type')} "
          f"output_dir={config.output_dir}")
    return 0


def _cmd_describe(path: str) -> int:
    try:
        snap = storage.load_snapshot(path)
    except (MalformedFile, OSError) as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return 2
    if isinstance(snap, CurveState):
        inv = invariants(snap)
        frame = build_frame(snap, check=False)
        print(f"curve snapshot: n={snap.n_nodes} time={snap.time:.6g}")
        print(f"  area={inv['area']:.12g} length={inv['length']:.12g} "
              f"turning={inv['turning']:.12g}")
        print(f"  centroid=({inv['cx']:.6g}, {inv['cy']:.6g}) "
              f"arc_chord_ratio={arc_chord_ratio(snap):.6g}")
        print(f"  kappa range=[{frame.kappa.min():.6g}, {frame.kappa.max():.6g}]")
    else:
        print(f"intrinsic snapshot: n={snap.grid.n_nodes} time={snap.time:.6g}")
        print(f"  theta0={snap.theta0:.12g} gamma0=({snap.gamma0[0]:.6g}, "
              f"{snap.gamma0[1]:.6g})")
        print(f"  g range=[{snap.g.min():.6g}, {snap.g.max():.6g}] "
              f"kappa range=[{snap.kappa.min():.6g}, {snap.kappa.max():.6g}]")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="patchlab", description="vortex patch boundary experiments"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="execute an experiment config")
    p_run.add_argument("config", help="path to a JSON experiment config")
    p_val = sub.add_parser("validate", help="check a config without running")
    p_val.add_argument("config", help="path to a JSON experiment config")
    p_desc = sub.add_parser("describe", help="summarize a snapshot file")
    p_desc.add_argument("snapshot", help="path to a snapshot JSON")
    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args.config)
    if args.command == "validate":
        return _cmd_validate(args.config)
    return _cmd_describe(args.snapshot)


if __name__ == "__main__":
    sys.exit(main())
