"""Boundary velocity of a constant-vorticity patch and its arc derivatives.

The patch vorticity is normalized to 2*pi, so the unit disk rotates with
boundary speed pi. The velocity is the log-kernel boundary integral of the
Biot-Savart law, oriented so that a positive patch spins counterclockwise.

Quadrature strategy: every integral is split into a model singular kernel
(half-cotangent or periodic log-sine) handled exactly in Fourier space and
a compensated remainder that is smooth along the curve, integrated by the
trapezoid rule with its analytic diagonal limit filled in. On analytic
curves all routes converge spectrally; for curves with merely continuous
curvature the second-derivative quadrature degrades gracefully and a
RoughCurvature warning is emitted.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import spectral, _kernels
from .errors import RoughCurvature
from .geometry import CurveState, GeometricFrame

__all__ = [
    "BoundaryVelocity",
    "velocity",
    "velocity_logsplit",
    "ds_velocity",
    "d2s_velocity",
    "tangential_coefficient",
    "tangential_coefficient_direct",
    "boundary_velocity",
]

#: Spectral tail fraction of kappa above which d2s accuracy is degraded.
ROUGH_KAPPA_TAIL = 1e-6


@dataclass
class BoundaryVelocity:
    """Velocity, its first and second arc derivatives, and scalar traces."""

    v: np.ndarray
    dsv: np.ndarray
    d2sv: np.ndarray
    a: np.ndarray  # -(dsv . T), the tangential stretching coefficient
    dsv_n: np.ndarray  # dsv . N
    d2sv_n: np.ndarray  # d2sv . N


def _split(pos: np.ndarray):
    return np.ascontiguousarray(pos[:, 0]), np.ascontiguousarray(pos[:, 1])


def velocity(curve: CurveState, frame: GeometricFrame) -> np.ndarray:
    """Boundary velocity at every node.

    Uses the integrated-by-parts form whose kernel is rational in the
    positions: the half-cotangent model part is the spectral Hilbert
    transform of the positions, the remainder is a smooth trapezoid sum.
    Agrees with `velocity_logsplit` to roundoff on band-limited curves.
    """
    pos = curve.positions
    n = curve.n_nodes
    h = curve.grid.spacing
    px, py = _split(pos)
    gd = frame.g[:, None] * frame.tangent
    diag = -frame.dg / (2.0 * frame.g)
    core = _kernels.velocity_sum(
        px, py, np.ascontiguousarray(gd[:, 0]), np.ascontiguousarray(gd[:, 1]),
        diag, _kernels.cot_table(n),
    )
    hpos = spectral.apply_multiplier(pos, spectral.hilbert_multiplier(n))
    return -(h * core + np.pi * hpos)


def velocity_logsplit(curve: CurveState, frame: GeometricFrame) -> np.ndarray:
    """Boundary velocity via the log-kernel splitting (reference route).

    Splits ln|chord| against ln|2 sin| — whose periodic convolution has
    exact Fourier weights — and integrates the smooth remainder by the
    trapezoid rule with diagonal value ln g.
    """
    pos = curve.positions
    n = curve.n_nodes
    h = curve.grid.spacing
    px, py = _split(pos)
    gd = frame.g[:, None] * frame.tangent
    core = _kernels.logsplit_sum(
        px, py, np.ascontiguousarray(gd[:, 0]), np.ascontiguousarray(gd[:, 1]),
        np.log(frame.g), _kernels.log_sine_table(n),
    )
    sing = spectral.apply_multiplier(gd, spectral.log_kernel_multiplier(n))
    return -(h * core + sing)


def ds_velocity(curve: CurveState, frame: GeometricFrame) -> np.ndarray:
    """First arc-length derivative of the boundary velocity."""
    pos = curve.positions
    h = curve.grid.spacing
    px, py = _split(pos)
    t = frame.tangent
    fill = (
        -(frame.dg / (2.0 * frame.g))[:, None] * t
        + (frame.g * frame.kappa)[:, None] * frame.normal
    )
    core = _kernels.ds_sum(
        px, py, frame.g,
        np.ascontiguousarray(t[:, 0]), np.ascontiguousarray(t[:, 1]),
        np.ascontiguousarray(fill[:, 0]), np.ascontiguousarray(fill[:, 1]),
    )
    return -h * core


def d2s_velocity(curve: CurveState, frame: GeometricFrame) -> np.ndarray:
    """Second arc-length derivative of the boundary velocity.

    Sum of the four compensated kernel families; the curvature-weighted
    singular part is completed spectrally with pi * H(kappa) * N.
    """
    tail = spectral.tail_energy_fraction(frame.kappa)
    if tail > ROUGH_KAPPA_TAIL:
        warnings.warn(
            f"curvature spectral tail fraction {tail:.2e}; "
            "second-derivative quadrature accuracy is reduced",
            RoughCurvature,
            stacklevel=2,
        )
    pos = curve.positions
    n = curve.n_nodes
    h = curve.grid.spacing
    px, py = _split(pos)
    t, nrm = frame.tangent, frame.normal
    core = _kernels.d2s_sum(
        px, py, frame.g,
        np.ascontiguousarray(t[:, 0]), np.ascontiguousarray(t[:, 1]),
        np.ascontiguousarray(nrm[:, 0]), np.ascontiguousarray(nrm[:, 1]),
        frame.kappa, frame.dg, _kernels.cot_table(n),
    )
    hkap = spectral.apply_multiplier(frame.kappa, spectral.hilbert_multiplier(n))
    return -h * core + np.pi * hkap[:, None] * nrm


def tangential_coefficient(curve: CurveState, frame: GeometricFrame) -> np.ndarray:
    """Stretching coefficient a = -(ds v . T) via the simplified integral.

    Evaluates the divergence-theorem form of the tangential trace, whose
    kernel is bounded along the curve; the direct route -(ds_velocity . T)
    is kept as `tangential_coefficient_direct` for cross-checking.
    """
    px, py = _split(curve.positions)
    t, nrm = frame.tangent, frame.normal
    core = _kernels.tangential_sum(
        px, py, frame.g,
        np.ascontiguousarray(t[:, 0]), np.ascontiguousarray(t[:, 1]),
        np.ascontiguousarray(nrm[:, 0]), np.ascontiguousarray(nrm[:, 1]),
    )
    return -curve.grid.spacing * core


def tangential_coefficient_direct(curve: CurveState, frame: GeometricFrame) -> np.ndarray:
    dsv = ds_velocity(curve, frame)
    return -np.sum(dsv * frame.tangent, axis=1)


def boundary_velocity(
    curve: CurveState, frame: GeometricFrame, second: bool = True
) -> BoundaryVelocity:
    """Assemble the full velocity record at every node."""
    v = velocity(curve, frame)
    dsv = ds_velocity(curve, frame)
    a = -np.sum(dsv * frame.tangent, axis=1)
    dsv_n = np.sum(dsv * frame.normal, axis=1)
    if second:
        d2sv = d2s_velocity(curve, frame)
        d2sv_n = np.sum(d2sv * frame.normal, axis=1)
    else:
        d2sv = np.full_like(dsv, np.nan)
        d2sv_n = np.full_like(a, np.nan)
    return BoundaryVelocity(v=v, dsv=dsv, d2sv=d2sv, a=a, dsv_n=dsv_n, d2sv_n=d2sv_n)
