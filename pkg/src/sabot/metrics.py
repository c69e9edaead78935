"""Pareto-front quality indicators: hypervolume, IGD, and IGD+."""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DimensionMismatch, EmptySet


def _as_points(points, dim=None):
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P.reshape(1, -1)
    if dim is not None and P.shape[1] != dim:
        raise DimensionMismatch(f"points of dim {P.shape[1]}, expected {dim}")
    return P


def hypervolume(points, reference_point, n_samples: int = 100_000, seed: int = 0) -> float:
    """Hypervolume dominated by ``points`` and bounded by ``reference_point``
    (minimization). Exact sort-and-sweep for two objectives; seeded Monte
    Carlo with ``n_samples`` draws for three or more."""
    ref = np.asarray(reference_point, dtype=float).ravel()
    P = _as_points(points, dim=ref.size)
    P = P[np.all(P < ref, axis=1)]
    if len(P) == 0:
        return 0.0
    if ref.size == 2:
        return _hv_2d(P, ref)
    return hypervolume_monte_carlo(P, ref, n_samples=n_samples, seed=seed)


def _hv_2d(P: np.ndarray, ref: np.ndarray) -> float:
    # sweep in increasing f1; each non-dominated point adds the rectangle
    # between its f2 and the best f2 seen so far
    order = np.lexsort((P[:, 1], P[:, 0]))
    P = P[order]
    total = 0.0
    best_f2 = ref[1]
    for f1, f2 in P:
        if f2 >= best_f2:
            continue
        total += (ref[0] - f1) * (best_f2 - f2)
        best_f2 = f2
    return float(total)


def hypervolume_monte_carlo(points, reference_point, n_samples: int = 100_000, seed: int = 0) -> float:
    """Monte Carlo hypervolume estimate over the bounding box
    [ideal(points), reference_point]."""
    ref = np.asarray(reference_point, dtype=float).ravel()
    P = _as_points(points, dim=ref.size)
    P = P[np.all(P < ref, axis=1)]
    if len(P) == 0:
        return 0.0
    lo = P.min(axis=0)
    box = np.prod(ref - lo)
    rng = np.random.default_rng(seed)
    samples = rng.uniform(lo, ref, size=(n_samples, ref.size))
    dominated = np.zeros(n_samples, dtype=bool)
    # chunk over points to bound memory
    for p in P:
        dominated |= np.all(samples >= p, axis=1)
    return float(box * dominated.mean())


def igd(reference_set, approximation_set) -> float:
    """Mean Euclidean distance from each reference point to its nearest
    approximation point (smaller is better)."""
    R = _as_points(reference_set)
    if R.size == 0:
        raise EmptySet("empty reference set")
    A = _as_points(approximation_set, dim=R.shape[1])
    if A.size == 0:
        raise EmptySet("empty approximation set")
    return float(cdist(R, A).min(axis=1).mean())


def igd_plus(reference_set, approximation_set) -> float:
    """IGD+ : one-sided per-coordinate distances max(a_i - r_i, 0) aggregated
    Euclidean-wise, then averaged over the reference set."""
    R = _as_points(reference_set)
    if R.size == 0:
        raise EmptySet("empty reference set")
    A = _as_points(approximation_set, dim=R.shape[1])
    if A.size == 0:
        raise EmptySet("empty approximation set")
    diff = np.maximum(A[None, :, :] - R[:, None, :], 0.0)
    d = np.sqrt(np.sum(diff**2, axis=2))
    return float(d.min(axis=1).mean())


INDICATORS = ("hv", "igd", "igd_plus")
