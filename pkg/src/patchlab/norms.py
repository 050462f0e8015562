"""Grid estimators for L^p norms and Hoelder seminorms."""

from __future__ import annotations

import numpy as np

__all__ = ["lp_norms", "lp_norm", "holder_seminorm"]


def _weights(g: np.ndarray | None, n: int) -> np.ndarray:
    """Arc-length quadrature weights normalized to total mass one."""
    if g is None:
        return np.full(n, 1.0 / n)
    g = np.asarray(g, dtype=np.float64)
    return g / float(np.sum(g))


def lp_norm(f: np.ndarray, p, g: np.ndarray | None = None) -> float:
    """L^p norm against the normalized arc-length measure.

    The measure has total mass one, so the norm is nondecreasing in p and
    tends to the grid sup norm as p grows. Pass p = inf (or the string
    "inf") for the sup norm. The power sum is evaluated in scaled form,
    max * (sum w (|f|/max)^p)^(1/p), so large p does not overflow.
    """
    f = np.asarray(f, dtype=np.float64)
    if isinstance(p, str):
        if p != "inf":
            raise ValueError(f"unknown norm order {p!r}")
        p = np.inf
    top = float(np.max(np.abs(f)))
    if not np.isfinite(p):
        return top
    if p < 1:
        raise ValueError("p must be >= 1")
    if top == 0.0:
        return 0.0
    w = _weights(g, f.shape[0])
    return top * float(np.sum(w * (np.abs(f) / top) ** p)) ** (1.0 / p)


def lp_norms(f: np.ndarray, g: np.ndarray | None, p_grid) -> list[float]:
    """L^p norms over a grid of exponents (see `lp_norm`)."""
    return [lp_norm(f, p, g) for p in p_grid]


def holder_seminorm(f: np.ndarray, beta: float, spacing: float | None = None) -> float:
    """Grid Hoelder-beta seminorm: max |f_j - f_k| / d(xi_j, xi_k)^beta.

    Distances are torus distances on the label grid. The grid value is a
    lower bound for the continuum seminorm; refinement trends, not the
    absolute constant, are the meaningful output.
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must lie in (0, 1]")
    f = np.asarray(f, dtype=np.float64)
    n = f.shape[0]
    if spacing is None:
        spacing = 2.0 * np.pi / n
    best = 0.0
    for m in range(1, n // 2 + 1):
        d = min(m * spacing, 2.0 * np.pi - m * spacing)
        gap = float(np.max(np.abs(f - np.roll(f, m))))
        val = gap / d**beta
        if val > best:
            best = val
    return best
