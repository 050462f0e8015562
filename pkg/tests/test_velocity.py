"""Boundary-velocity oracles, dual-route agreement, and symmetry checks."""

import warnings

import numpy as np
import pytest

from patchlab.errors import RoughCurvature
from patchlab.geometry import CurveState, build_frame, circle, ellipse
from patchlab.hilbert import hilbert
from patchlab.illposed import IllposedDataSpec, build_illposed_data, forcing_terms
from patchlab.velocity import (
    boundary_velocity,
    d2s_velocity,
    ds_velocity,
    tangential_coefficient,
    tangential_coefficient_direct,
    velocity,
    velocity_logsplit,
)
from patchlab import spectral


def _ellipse_fields(n=512, a=2.0, b=1.0):
    c = ellipse(n, a, b)
    f = build_frame(c)
    return c, f


def test_circle_velocity_oracle():
    c = circle(256)
    f = build_frame(c)
    v = velocity(c, f)
    # the unit disk rotates rigidly with boundary speed pi
    assert np.max(np.abs(v - np.pi * f.tangent)) < 1e-12


def test_circle_velocity_scales_with_radius():
    for r in (0.5, 3.0):
        c = circle(128, radius=r)
        f = build_frame(c)
        v = velocity(c, f)
        assert np.max(np.abs(v - np.pi * r * f.tangent)) < 1e-11


def test_circle_derivative_oracles():
    c = circle(256)
    f = build_frame(c)
    dsv = ds_velocity(c, f)
    assert np.max(np.abs(dsv + np.pi * f.normal)) < 1e-12
    d2sv = d2s_velocity(c, f)
    assert np.max(np.abs(d2sv + np.pi * f.tangent)) < 1e-10
    # rigid rotation: no stretching, and the normal trace of d2s vanishes
    assert np.max(np.abs(tangential_coefficient(c, f))) < 1e-12
    assert np.max(np.abs(np.sum(d2sv * f.normal, axis=1))) < 1e-10


def test_velocity_dual_route_agreement():
    c, f = _ellipse_fields()
    assert np.max(np.abs(velocity(c, f) - velocity_logsplit(c, f))) < 1e-11


def test_tangential_dual_formula_agreement():
    c, f = _ellipse_fields()
    fast = tangential_coefficient(c, f)
    direct = tangential_coefficient_direct(c, f)
    assert np.max(np.abs(fast - direct)) < 1e-8


def test_flux_free():
    c, f = _ellipse_fields()
    v = velocity(c, f)
    flux = c.grid.spacing * np.sum(np.sum(v * f.normal, axis=1) * f.g)
    assert abs(flux) < 1e-10


def test_d2s_matches_spectral_differentiation():
    # quadrature vs differentiate-the-samples, refining 256 -> 2048
    for n in (256, 512, 1024, 2048):
        c, f = _ellipse_fields(n)
        dsv = ds_velocity(c, f)
        d2 = d2s_velocity(c, f)
        ref = spectral.deriv(dsv) / f.g[:, None]
        err = np.sqrt(np.mean(np.sum((d2 - ref) ** 2, axis=1)))
        scale = np.sqrt(np.mean(np.sum(ref**2, axis=1)))
        assert err / scale < 1e-10


def test_velocity_rigid_equivariance():
    c, f = _ellipse_fields(128)
    v0 = velocity(c, f)
    ang = 1.1
    rot = np.array([[np.cos(ang), -np.sin(ang)], [np.sin(ang), np.cos(ang)]])
    moved = CurveState(c.grid, c.positions @ rot.T + np.array([5.0, -2.0]))
    fm = build_frame(moved)
    vm = velocity(moved, fm)
    assert np.max(np.abs(vm - v0 @ rot.T)) < 1e-10


def test_forcing_rigid_invariance():
    c, f = _ellipse_fields(128)
    bv = boundary_velocity(c, f)
    a0, fl0, fn0 = forcing_terms(c, f, bv)
    ang = -0.4
    rot = np.array([[np.cos(ang), -np.sin(ang)], [np.sin(ang), np.cos(ang)]])
    moved = CurveState(c.grid, c.positions @ rot.T + np.array([-1.0, 2.0]))
    fm = build_frame(moved)
    bvm = boundary_velocity(moved, fm)
    a1, fl1, fn1 = forcing_terms(moved, fm, bvm)
    assert np.max(np.abs(a1 - a0)) < 1e-10
    assert np.max(np.abs(fl1 - fl0)) < 1e-10
    assert np.max(np.abs(fn1 - fn0)) < 1e-10


def test_circle_forcing_reassembly_steady():
    c = circle(256)
    f = build_frame(c)
    bv = boundary_velocity(c, f)
    a, f_l, f_n = forcing_terms(c, f, bv)
    dkappa = a * f.kappa - np.pi * hilbert(f.kappa) + f_l + f_n
    assert np.max(np.abs(dkappa)) < 1e-8


def test_rough_curvature_warning():
    spec = IllposedDataSpec(epsilon=0.3, n_nodes=512)
    curve, _ = build_illposed_data(spec)
    frame = build_frame(curve, tail_tol=None)
    with pytest.warns(RoughCurvature):
        d2s_velocity(curve, frame)


def test_rough_data_quadratures_stable_under_doubling():
    # no exact rate for merely-continuous curvature, but the velocity and
    # first derivative should be grid-stable in L2
    prev = None
    for n in (512, 1024):
        spec = IllposedDataSpec(epsilon=0.3, n_nodes=n)
        curve, _ = build_illposed_data(spec)
        frame = build_frame(curve, tail_tol=None)
        v = velocity(curve, frame)
        dsv = ds_velocity(curve, frame)
        assert np.all(np.isfinite(v)) and np.all(np.isfinite(dsv))
        l2 = np.sqrt(np.mean(np.sum(dsv**2, axis=1)))
        if prev is not None:
            assert l2 == pytest.approx(prev, rel=1e-3)
        prev = l2


def test_boundary_velocity_assembly_consistent():
    c, f = _ellipse_fields(128)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bv = boundary_velocity(c, f)
    assert np.max(np.abs(bv.v - velocity(c, f))) == 0.0
    assert np.max(np.abs(bv.a + np.sum(bv.dsv * f.tangent, axis=1))) < 1e-14
    assert np.max(np.abs(bv.dsv_n - np.sum(bv.dsv * f.normal, axis=1))) == 0.0
    skipped = boundary_velocity(c, f, second=False)
    assert np.all(np.isnan(skipped.d2sv))
