"""Snapshot and table serialization.

Curves and intrinsic states round-trip through small JSON documents;
diagnostic tables are emitted as flat CSVs with header rows. All floats
are written in decimal with enough digits for an exact binary round trip,
so repeated identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import MalformedFile
from .geometry import CurveState, IntrinsicState, LagrangianGrid

__all__ = [
    "save_curve",
    "load_curve",
    "save_intrinsic",
    "load_intrinsic",
    "load_snapshot",
    "write_invariants_csv",
    "write_velocity_csv",
    "write_lp_table_csv",
    "write_slopes_csv",
    "write_remainder_csv",
    "write_report_json",
]


def _fmt(x) -> str:
    """Decimal form with 17 significant digits (exact float round trip)."""
    return format(float(x), ".17g")


def _dump(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, sort_keys=True) + "\n")


def _parse(path) -> dict:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: invalid JSON at byte {exc.pos}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise MalformedFile(f"{path}: expected a JSON object at the top level")
    return doc


def _field(doc: dict, path, key: str, kind):
    if key not in doc:
        raise MalformedFile(f"{path}: missing field {key!r}")
    val = doc[key]
    if kind is list and not isinstance(val, list):
        raise MalformedFile(f"{path}: field {key!r} must be an array")
    if kind is float and not isinstance(val, (int, float)):
        raise MalformedFile(f"{path}: field {key!r} must be a number")
    if kind is int and not isinstance(val, int):
        raise MalformedFile(f"{path}: field {key!r} must be an integer")
    return val


def save_curve(curve: CurveState, path) -> None:
    """Write a curve snapshot: {"n", "time", "x": [...], "y": [...]}."""
    _dump(
        {
            "n": curve.n_nodes,
            "time": curve.time,
            "x": list(curve.positions[:, 0]),
            "y": list(curve.positions[:, 1]),
        },
        path,
    )


def load_curve(path) -> CurveState:
    doc = _parse(path)
    n = _field(doc, path, "n", int)
    x = _field(doc, path, "x", list)
    y = _field(doc, path, "y", list)
    t = _field(doc, path, "time", float)
    if len(x) != n or len(y) != n:
        raise MalformedFile(
            f"{path}: array lengths ({len(x)}, {len(y)}) do not match n = {n}"
        )
    pos = np.column_stack([np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)])
    return CurveState(LagrangianGrid(n), pos, time=float(t))


def save_intrinsic(state: IntrinsicState, path) -> None:
    """Write an intrinsic snapshot: metric, curvature, and node-0 anchors."""
    _dump(
        {
            "n": state.grid.n_nodes,
            "time": state.time,
            "g": list(state.g),
            "kappa": list(state.kappa),
            "theta0": state.theta0,
            "gamma0": list(state.gamma0),
        },
        path,
    )


def load_intrinsic(path) -> IntrinsicState:
    doc = _parse(path)
    n = _field(doc, path, "n", int)
    g = _field(doc, path, "g", list)
    kappa = _field(doc, path, "kappa", list)
    theta0 = _field(doc, path, "theta0", float)
    gamma0 = _field(doc, path, "gamma0", list)
    t = _field(doc, path, "time", float)
    if len(g) != n or len(kappa) != n:
        raise MalformedFile(
            f"{path}: array lengths ({len(g)}, {len(kappa)}) do not match n = {n}"
        )
    if len(gamma0) != 2:
        raise MalformedFile(f"{path}: gamma0 must be a 2-vector")
    return IntrinsicState(
        grid=LagrangianGrid(n),
        g=np.asarray(g, dtype=np.float64),
        kappa=np.asarray(kappa, dtype=np.float64),
        theta0=float(theta0),
        gamma0=np.asarray(gamma0, dtype=np.float64),
        time=float(t),
    )


def load_snapshot(path):
    """Load either snapshot flavor, keyed on the fields present."""
    doc = _parse(path)
    if "x" in doc and "y" in doc:
        return load_curve(path)
    if "g" in doc and "kappa" in doc:
        return load_intrinsic(path)
    raise MalformedFile(f"{path}: neither a curve nor an intrinsic snapshot")


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_invariants_csv(invariant_log, path) -> None:
    """Per-step conserved quantities: t, area, length, turning, cx, cy."""
    cols = ("t", "area", "length", "turning", "cx", "cy")
    _write_csv(path, cols, ([_fmt(row[c]) for c in cols] for row in invariant_log))


def write_velocity_csv(labels, bv, path) -> None:
    """Boundary-velocity dump: xi, vx, vy, dsv_t, dsv_n, d2sv_n, a."""
    dsv_t = -bv.a
    rows = (
        [
            _fmt(labels[j]),
            _fmt(bv.v[j, 0]),
            _fmt(bv.v[j, 1]),
            _fmt(dsv_t[j]),
            _fmt(bv.dsv_n[j]),
            _fmt(bv.d2sv_n[j]),
            _fmt(bv.a[j]),
        ]
        for j in range(len(labels))
    )
    _write_csv(path, ("xi", "vx", "vy", "dsv_t", "dsv_n", "d2sv_n", "a"), rows)


def write_lp_table_csv(report, path) -> None:
    """Flat norm table: one (t, p, norm) row per cell."""
    rows = (
        [_fmt(t), _fmt(p), _fmt(report.lp_table[i, j])]
        for i, t in enumerate(report.t_grid)
        for j, p in enumerate(report.p_grid)
    )
    _write_csv(path, ("t", "p", "norm"), rows)


def write_slopes_csv(report, path) -> None:
    """Fitted growth exponent of the norm table per time: t, slope."""
    rows = ([_fmt(t), _fmt(report.slopes[i])] for i, t in enumerate(report.t_grid))
    _write_csv(path, ("t", "slope"), rows)


def write_remainder_csv(report, path) -> None:
    """Duhamel remainder sizes per time: t, sup, holder_half."""
    rows = (
        [_fmt(t), _fmt(report.duhamel_sup[i]), _fmt(report.duhamel_holder_half[i])]
        for i, t in enumerate(report.duhamel_t)
    )
    _write_csv(path, ("t", "sup", "holder_half"), rows)


def write_report_json(report, path) -> None:
    """Full diagnostics report as one JSON document (tables inline)."""
    doc = {
        "p_grid": list(report.p_grid),
        "t_grid": list(report.t_grid),
        "lp_table": None if report.lp_table is None else [list(r) for r in report.lp_table],
        "slopes": None if report.slopes is None else list(report.slopes),
        "linear_lp_table": (
            None
            if report.linear_lp_table is None
            else [list(r) for r in report.linear_lp_table]
        ),
        "linear_slopes": (
            None if report.linear_slopes is None else list(report.linear_slopes)
        ),
        "duhamel_t": list(report.duhamel_t),
        "duhamel_sup": list(report.duhamel_sup),
        "duhamel_holder_half": list(report.duhamel_holder_half),
        "forcing_norms": report.forcing_norms,
        "metadata": {
            k: v for k, v in report.metadata.items() if isinstance(v, (int, float, str))
        },
    }
    _dump(doc, path)
