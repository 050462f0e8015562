"""Closed-curve representations and intrinsic geometric quantities.

Curves live on a uniform periodic label grid. Orientation is normalized to
counterclockwise; the outer normal is N = (T_y, -T_x) and the signed
curvature is the arc-length derivative of the tangent angle, so a convex
counterclockwise curve has positive curvature and total turning 2*pi.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import spectral, _kernels
from .errors import (
    ClosureViolated,
    DegenerateCurve,
    GridTooCoarse,
    NonSimpleCurve,
)

__all__ = [
    "LagrangianGrid",
    "CurveState",
    "GeometricFrame",
    "IntrinsicState",
    "build_frame",
    "arc_chord_ratio",
    "closure_residual",
    "reconstruct_curve",
    "resample_arclength",
    "intrinsic_from_curve",
    "circle",
    "ellipse",
]

#: Default cap on the arc-chord ratio before a curve is declared non-simple.
DEFAULT_ARC_CHORD_CAP = 50.0
#: Default cap on the top-third spectral energy fraction of positions.
DEFAULT_TAIL_TOL = 1e-6
#: Default tolerance on the intrinsic closure residual.
DEFAULT_CLOSURE_TOL = 1e-6


@dataclass(frozen=True)
class LagrangianGrid:
    """Uniform label grid xi_j = 2*pi*j/n on the periodic interval."""

    n_nodes: int

    def __post_init__(self):
        if self.n_nodes < 16:
            raise GridTooCoarse(f"need at least 16 nodes, got {self.n_nodes}")
        if self.n_nodes % 2 != 0:
            raise GridTooCoarse("node count must be even for the periodic quadratures")

    @property
    def labels(self) -> np.ndarray:
        return spectral.labels(self.n_nodes)

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.n_nodes


@dataclass
class CurveState:
    """Sampled boundary positions plus simulation time.

    The constructor normalizes orientation to counterclockwise (reversing
    the traversal about node 0 if the signed area is negative) and records
    whether it did so.
    """

    grid: LagrangianGrid
    positions: np.ndarray
    time: float = 0.0
    orientation_flipped: bool = field(default=False, compare=False)

    def __post_init__(self):
        pos = np.ascontiguousarray(self.positions, dtype=np.float64)
        if pos.shape != (self.grid.n_nodes, 2):
            raise ValueError(
                f"positions must have shape ({self.grid.n_nodes}, 2), got {pos.shape}"
            )
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        if _signed_area(pos) < 0.0:
            idx = (-np.arange(self.grid.n_nodes)) % self.grid.n_nodes
            pos = pos[idx]
            self.orientation_flipped = True
        self.positions = pos

    @property
    def n_nodes(self) -> int:
        return self.grid.n_nodes


@dataclass
class GeometricFrame:
    """Per-node metric, tangent angle, frame vectors, and curvature."""

    g: np.ndarray
    theta: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    kappa: np.ndarray
    dg: np.ndarray  # spectral d g / d xi, used by the quadrature fills


@dataclass
class IntrinsicState:
    """Metric and curvature arrays plus the anchor data for reconstruction."""

    grid: LagrangianGrid
    g: np.ndarray
    kappa: np.ndarray
    theta0: float
    gamma0: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.g = np.ascontiguousarray(self.g, dtype=np.float64)
        self.kappa = np.ascontiguousarray(self.kappa, dtype=np.float64)
        self.gamma0 = np.asarray(self.gamma0, dtype=np.float64)
        n = self.grid.n_nodes
        if self.g.shape != (n,) or self.kappa.shape != (n,):
            raise ValueError("g and kappa must be length-n arrays")
        if self.gamma0.shape != (2,):
            raise ValueError("gamma0 must be a 2-vector")


def _signed_area(pos: np.ndarray) -> float:
    x, y = pos[:, 0], pos[:, 1]
    x1, y1 = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.sum(x * y1 - x1 * y))


def circle(n: int, radius: float = 1.0, center=(0.0, 0.0)) -> CurveState:
    xi = spectral.labels(n)
    pos = np.column_stack(
        [center[0] + radius * np.cos(xi), center[1] + radius * np.sin(xi)]
    )
    return CurveState(LagrangianGrid(n), pos)


def ellipse(n: int, a: float = 2.0, b: float = 1.0, center=(0.0, 0.0)) -> CurveState:
    xi = spectral.labels(n)
    pos = np.column_stack([center[0] + a * np.cos(xi), center[1] + b * np.sin(xi)])
    return CurveState(LagrangianGrid(n), pos)


def build_frame(
    curve: CurveState,
    arc_chord_cap: float = DEFAULT_ARC_CHORD_CAP,
    tail_tol: float | None = DEFAULT_TAIL_TOL,
    check: bool = True,
) -> GeometricFrame:
    """Metric, tangent/normal frame, tangent angle, and curvature.

    All derivatives are spectral. Raises NonSimpleCurve when the metric
    degenerates, the arc-chord ratio exceeds `arc_chord_cap`, or the
    tangent winding is not a single turn; raises GridTooCoarse when the
    top third of the position spectrum carries more than `tail_tol` of the
    energy (pass tail_tol=None to skip the aliasing guard).
    """
    pos = curve.positions
    n = curve.n_nodes
    dpos = spectral.deriv(pos)
    g = np.hypot(dpos[:, 0], dpos[:, 1])
    scale = float(np.max(np.abs(pos - pos.mean(axis=0))))
    if np.min(g) <= 1e-12 * max(scale, 1e-300):
        raise NonSimpleCurve("discrete metric vanishes")
    if check:
        if tail_tol is not None:
            frac = spectral.tail_energy_fraction(pos)
            if frac > tail_tol:
                raise GridTooCoarse(
                    f"top-third spectral energy fraction {frac:.3e} exceeds {tail_tol:.1e}"
                )
        ratio = arc_chord_ratio(curve)
        if ratio > arc_chord_cap:
            raise NonSimpleCurve(
                f"arc-chord ratio {ratio:.3f} exceeds cap {arc_chord_cap:.3f}"
            )
    tangent = dpos / g[:, None]
    normal = np.column_stack([tangent[:, 1], -tangent[:, 0]])
    theta = np.unwrap(np.arctan2(tangent[:, 1], tangent[:, 0]))
    closed = np.unwrap(np.append(theta, theta[0]))
    winding = (closed[-1] - closed[0]) / (2.0 * np.pi)
    if abs(winding - 1.0) > 1e-6:
        raise NonSimpleCurve(f"tangent winding {winding:.6f} != 1")
    # differentiate the periodic part of theta; the ramp contributes 1
    dtheta = spectral.deriv(theta - curve.grid.labels) + 1.0
    kappa = dtheta / g
    dg = spectral.deriv(g)
    return GeometricFrame(g=g, theta=theta, tangent=tangent, normal=normal, kappa=kappa, dg=dg)


def arc_chord_ratio(curve: CurveState) -> float:
    """Max over node pairs of torus label distance over chord length."""
    pos = curve.positions
    ratio, cmin, cmax = _kernels.arc_chord_scan(
        np.ascontiguousarray(pos[:, 0]),
        np.ascontiguousarray(pos[:, 1]),
        curve.grid.spacing,
    )
    if cmin < 1e-14 * cmax:
        raise DegenerateCurve(
            f"nodes nearly coincide (min chord {cmin:.3e} vs diameter {cmax:.3e})"
        )
    return float(ratio)


def closure_residual(state: IntrinsicState) -> tuple[np.ndarray, float]:
    """Vector and turning closure defects of intrinsic data.

    Returns (integral of (cos theta, sin theta) g over the label circle,
    integral of kappa*g minus 2*pi). Both vanish exactly for data that
    describes a closed curve.
    """
    h = state.grid.spacing
    kg = state.kappa * state.g
    theta = state.theta0 + spectral.cumint(kg)
    vec = h * np.array(
        [np.sum(np.cos(theta) * state.g), np.sum(np.sin(theta) * state.g)]
    )
    turning = h * float(np.sum(kg)) - 2.0 * np.pi
    return vec, turning


def reconstruct_curve(
    state: IntrinsicState, closure_tol: float = DEFAULT_CLOSURE_TOL
) -> CurveState:
    """Rebuild positions from (g, kappa) and the anchors at node 0."""
    vec, turning = closure_residual(state)
    defect = max(float(np.max(np.abs(vec))), abs(turning))
    if defect > closure_tol:
        raise ClosureViolated(
            f"closure residual {defect:.3e} exceeds tolerance {closure_tol:.1e}"
        )
    theta = state.theta0 + spectral.cumint(state.kappa * state.g)
    tg = np.column_stack([np.cos(theta) * state.g, np.sin(theta) * state.g])
    pos = state.gamma0[None, :] + spectral.cumint(tg)
    return CurveState(state.grid, pos, time=state.time)


def intrinsic_from_curve(curve: CurveState, frame: GeometricFrame | None = None) -> IntrinsicState:
    """Extract (g, kappa) and node-0 anchors from a sampled curve."""
    if frame is None:
        frame = build_frame(curve)
    return IntrinsicState(
        grid=curve.grid,
        g=frame.g.copy(),
        kappa=frame.kappa.copy(),
        theta0=float(frame.theta[0]),
        gamma0=curve.positions[0].copy(),
        time=curve.time,
    )


def resample_arclength(
    curve: CurveState, max_iter: int = 30, tol: float = 1e-13
) -> CurveState:
    """Reparametrize so the discrete metric is constant, keeping node 0.

    Inverts the arc-length function with Newton's method on the trig
    interpolant, then evaluates the position series at the new labels.
    """
    frame = build_frame(curve, check=False)
    g = frame.g
    n = curve.n_nodes
    length = 2.0 * np.pi * float(np.mean(g))
    s = spectral.cumint(g)
    target = length * np.arange(n) / n
    g_series = spectral.interp_series(g)
    # periodic part of the arc-length function for off-grid evaluation
    sp_series = spectral.interp_series(s - curve.grid.labels * (length / (2.0 * np.pi)))
    xi = curve.grid.labels.copy()
    rate = length / (2.0 * np.pi)
    for _ in range(max_iter):
        s_val = spectral.eval_series(sp_series, xi) + rate * xi
        err = s_val - target
        if np.max(np.abs(err)) < tol * max(length, 1.0):
            break
        g_val = spectral.eval_series(g_series, xi)
        xi = xi - err / g_val
    pos_series = spectral.interp_series(curve.positions)
    pos = spectral.eval_series(pos_series, xi)
    return CurveState(curve.grid, pos, time=curve.time)
