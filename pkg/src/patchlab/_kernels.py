"""Compiled O(N^2) quadrature kernels.

Every kernel sums a singularity-compensated integrand row by row; rows are
independent (prange) and each row is accumulated sequentially, so results
are bit-reproducible for any thread count. Inner loops are kept free of
transcendental calls: the periodic model kernels (half-cotangent, log-sine)
depend only on the label offset j - k and are passed in as precomputed
tables.

Set the PATCHLAB_THREADS environment variable before import to cap the
worker count.
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np
import numba
from numba import njit, prange

_env_threads = os.environ.get("PATCHLAB_THREADS")
if _env_threads:
    try:
        numba.set_num_threads(max(1, min(int(_env_threads), numba.config.NUMBA_NUM_THREADS)))
    except ValueError:
        pass


@lru_cache(maxsize=32)
def cot_table(n: int) -> np.ndarray:
    """c[m] = 0.5 * cot(m*h/2) for offsets m = 1..n-1; c[0] = 0."""
    h = 2.0 * np.pi / n
    m = np.arange(1, n) * h
    out = np.zeros(n)
    out[1:] = 0.5 / np.tan(0.5 * m)
    return out


@lru_cache(maxsize=32)
def log_sine_table(n: int) -> np.ndarray:
    """t[m] = ln|2 sin(m*h/2)| for offsets m = 1..n-1; t[0] = 0 (unused)."""
    h = 2.0 * np.pi / n
    m = np.arange(1, n) * h
    out = np.zeros(n)
    out[1:] = np.log(np.abs(2.0 * np.sin(0.5 * m)))
    return out


@njit(cache=True, fastmath=True, parallel=True)
def arc_chord_scan(px, py, h):
    """Max of torus-distance/chord over pairs, plus min and max chord."""
    n = px.shape[0]
    row_ratio = np.empty(n)
    row_min = np.empty(n)
    row_max = np.empty(n)
    half = np.pi
    for j in prange(n):
        best = 0.0
        cmin = 1e300
        cmax = 0.0
        for k in range(j + 1, n):
            d = (k - j) * h
            if d > half:
                d = 2.0 * np.pi - d
            dx = px[j] - px[k]
            dy = py[j] - py[k]
            chord = np.sqrt(dx * dx + dy * dy)
            if chord < cmin:
                cmin = chord
            if chord > cmax:
                cmax = chord
            r = d / chord if chord > 0.0 else 1e300
            if r > best:
                best = r
        row_ratio[j] = best
        row_min[j] = cmin
        row_max[j] = cmax
    ratio = 0.0
    cmin = 1e300
    cmax = 0.0
    for j in range(n - 1):
        if row_ratio[j] > ratio:
            ratio = row_ratio[j]
        if row_min[j] < cmin:
            cmin = row_min[j]
        if row_max[j] > cmax:
            cmax = row_max[j]
    return ratio, cmin, cmax


@njit(cache=True, fastmath=True, parallel=True)
def velocity_sum(px, py, gdx, gdy, diag, cot):
    """Rows of sum_k B(j,k) * gamma_k with the half-cot model subtracted.

    B(j,k) = ((gamma_j - gamma_k) . gammadot_k)/|gamma_j - gamma_k|^2
             - cot[(j-k) mod n], and B(j,j) = diag_j.
    """
    n = px.shape[0]
    out = np.empty((n, 2))
    for j in prange(n):
        ax = 0.0
        ay = 0.0
        xj = px[j]
        yj = py[j]
        for k in range(j):
            dx = xj - px[k]
            dy = yj - py[k]
            b = (dx * gdx[k] + dy * gdy[k]) / (dx * dx + dy * dy) - cot[j - k]
            ax += b * px[k]
            ay += b * py[k]
        for k in range(j + 1, n):
            dx = xj - px[k]
            dy = yj - py[k]
            b = (dx * gdx[k] + dy * gdy[k]) / (dx * dx + dy * dy) + cot[k - j]
            ax += b * px[k]
            ay += b * py[k]
        out[j, 0] = ax + diag[j] * xj
        out[j, 1] = ay + diag[j] * yj
    return out


@njit(cache=True, fastmath=True, parallel=True)
def logsplit_sum(px, py, gdx, gdy, diag, logs2):
    """Rows of sum_k ln(|gamma_j - gamma_k| / |2 sin|) * gammadot_k.

    diag_j supplies the smooth diagonal limit ln(g_j).
    """
    n = px.shape[0]
    out = np.empty((n, 2))
    for j in prange(n):
        ax = 0.0
        ay = 0.0
        xj = px[j]
        yj = py[j]
        for k in range(n):
            if k == j:
                continue
            dx = xj - px[k]
            dy = yj - py[k]
            m = j - k if j > k else k - j
            s = 0.5 * np.log(dx * dx + dy * dy) - logs2[m]
            ax += s * gdx[k]
            ay += s * gdy[k]
        out[j, 0] = ax + diag[j] * gdx[j]
        out[j, 1] = ay + diag[j] * gdy[j]
    return out


@njit(cache=True, fastmath=True, parallel=True)
def ds_sum(px, py, g, tx, ty, fx, fy):
    """Rows of sum_k T_k g_k ((gamma_j - gamma_k) . T_j)/r^2 with diag fill.

    The half-cot model term multiplies the constant T_j, whose symmetric
    full-grid sum vanishes identically for even n, so it is omitted.
    """
    n = px.shape[0]
    out = np.empty((n, 2))
    for j in prange(n):
        ax = 0.0
        ay = 0.0
        xj = px[j]
        yj = py[j]
        txj = tx[j]
        tyj = ty[j]
        for k in range(n):
            if k == j:
                continue
            dx = xj - px[k]
            dy = yj - py[k]
            kd = (dx * txj + dy * tyj) / (dx * dx + dy * dy) * g[k]
            ax += kd * tx[k]
            ay += kd * ty[k]
        out[j, 0] = ax + fx[j]
        out[j, 1] = ay + fy[j]
    return out


@njit(cache=True, fastmath=True, parallel=True)
def d2s_sum(px, py, g, tx, ty, nx, ny, kap, dg, cot):
    """Combined second-derivative integrand rows (model-subtracted).

    Accumulates the four kernel families of the second arc-length
    derivative in one pass: the curvature-weighted normal kernel with its
    half-cot model term split off, the two bounded tangent-difference
    kernels, and the curvature-scaled near-field kernel, each with its
    analytic diagonal limit. The spectral Hilbert completion of the model
    term is added by the caller.
    """
    n = px.shape[0]
    out = np.empty((n, 2))
    for j in prange(n):
        ax = 0.0
        ay = 0.0
        w1 = 0.0
        a3x = 0.0
        a3y = 0.0
        xj = px[j]
        yj = py[j]
        txj = tx[j]
        tyj = ty[j]
        nxj = nx[j]
        nyj = ny[j]
        for k in range(n):
            if k == j:
                continue
            dx = xj - px[k]
            dy = yj - py[k]
            r2 = dx * dx + dy * dy
            gk = g[k]
            at = dx * txj + dy * tyj
            an = dx * nxj + dy * nyj
            dtx = txj - tx[k]
            dty = tyj - ty[k]
            dtt = dtx * txj + dty * tyj
            adt = dx * dtx + dy * dty
            kd = at / r2
            # curvature-weighted normal kernel, model part accumulated in w1
            ck = kap[k]
            ax -= ck * nx[k] * gk * kd
            ay -= ck * ny[k] * gk * kd
            m = j - k if j > k else k - j
            c = cot[m] if j > k else -cot[m]
            w1 += ck * c
            # bounded tangent-difference kernel
            w2 = dtt / r2 * gk
            ax += w2 * tx[k]
            ay += w2 * ty[k]
            # curvature-scaled kernel, factored: inner integral first
            w3 = an / r2 * gk
            a3x += w3 * tx[k]
            a3y += w3 * ty[k]
            # near-field product kernel
            w4 = 2.0 * at * adt / (r2 * r2) * gk
            ax -= w4 * tx[k]
            ay -= w4 * ty[k]
        kj = kap[j]
        gj = g[j]
        # diagonal limits
        ax -= kj * (-gj * kj * txj - nxj * dg[j] / (2.0 * gj))
        ay -= kj * (-gj * kj * tyj - nyj * dg[j] / (2.0 * gj))
        ax += 0.5 * kj * kj * gj * txj
        ay += 0.5 * kj * kj * gj * tyj
        a3x += 0.5 * kj * gj * txj
        a3y += 0.5 * kj * gj * tyj
        out[j, 0] = ax + w1 * nxj - kj * a3x
        out[j, 1] = ay + w1 * nyj - kj * a3y
    return out


@njit(cache=True, fastmath=True, parallel=True)
def tangential_sum(px, py, g, tx, ty, nx, ny):
    """Rows of sum_k (T_k . N_j)((gamma_j - gamma_k) . N_j)/r^2 g_k.

    Bounded kernel; the diagonal limit vanishes.
    """
    n = px.shape[0]
    out = np.empty(n)
    for j in prange(n):
        acc = 0.0
        xj = px[j]
        yj = py[j]
        nxj = nx[j]
        nyj = ny[j]
        for k in range(n):
            if k == j:
                continue
            dx = xj - px[k]
            dy = yj - py[k]
            tn = tx[k] * nxj + ty[k] * nyj
            an = dx * nxj + dy * nyj
            acc += tn * an / (dx * dx + dy * dy) * g[k]
        out[j] = acc
    return out


@njit(cache=True, fastmath=True, parallel=True)
def linear_error_sum(px, py, g, tx, ty, nx, ny, kap, dg, cot):
    """Rows of sum_k kappa_k [ (N_k . N_j) Kd g_k - cot ] with diag fill.

    This is the curvature-weighted singular kernel minus its half-cot
    model; the diagonal limit of the bracket is -g'_j/(2 g_j).
    """
    n = px.shape[0]
    out = np.empty(n)
    for j in prange(n):
        acc = 0.0
        xj = px[j]
        yj = py[j]
        txj = tx[j]
        tyj = ty[j]
        nxj = nx[j]
        nyj = ny[j]
        for k in range(n):
            if k == j:
                continue
            dx = xj - px[k]
            dy = yj - py[k]
            r2 = dx * dx + dy * dy
            kd = (dx * txj + dy * tyj) / r2
            nn = nx[k] * nxj + ny[k] * nyj
            m = j - k if j > k else k - j
            c = cot[m] if j > k else -cot[m]
            acc += kap[k] * (nn * kd * g[k] - c)
        out[j] = acc + kap[j] * (-dg[j] / (2.0 * g[j]))
    return out


@njit(cache=True, fastmath=True, parallel=True)
def nonlinear_error_sums(px, py, g, tx, ty, nx, ny):
    """Rows of the two bounded error integrands projected on N_j.

    Returns (I2, I3): the tangent-difference kernel and the near-field
    product kernel, both with vanishing diagonal limits on N_j.
    """
    n = px.shape[0]
    out2 = np.empty(n)
    out3 = np.empty(n)
    for j in prange(n):
        acc2 = 0.0
        acc3 = 0.0
        xj = px[j]
        yj = py[j]
        txj = tx[j]
        tyj = ty[j]
        nxj = nx[j]
        nyj = ny[j]
        for k in range(n):
            if k == j:
                continue
            dx = xj - px[k]
            dy = yj - py[k]
            r2 = dx * dx + dy * dy
            tn = tx[k] * nxj + ty[k] * nyj
            dtx = txj - tx[k]
            dty = tyj - ty[k]
            dtt = dtx * txj + dty * tyj
            at = dx * txj + dy * tyj
            adt = dx * dtx + dy * dty
            acc2 += tn * dtt / r2 * g[k]
            acc3 += tn * at * adt / (r2 * r2) * g[k]
        out2[j] = acc2
        out3[j] = acc3
    return out2, out3
