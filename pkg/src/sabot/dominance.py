"""Pareto dominance, constraint-domination, sorting, and crowding distance."""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import LengthMismatch


class Dominance(Enum):
    A_DOMINATES_B = "a_dominates_b"
    B_DOMINATES_A = "b_dominates_a"
    INCOMPARABLE = "incomparable"
    EQUAL = "equal"


def dominates(a, b) -> Dominance:
    """Pareto dominance for minimization of two objective vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise LengthMismatch(f"vectors of length {a.size} and {b.size}")
    if np.array_equal(a, b):
        return Dominance.EQUAL
    if np.all(a <= b):
        return Dominance.A_DOMINATES_B
    if np.all(b <= a):
        return Dominance.B_DOMINATES_A
    return Dominance.INCOMPARABLE


def constrained_dominates(f_a, viol_a: float, f_b, viol_b: float) -> Dominance:
    """Constraint-domination: feasible beats infeasible; among infeasible the
    smaller total violation wins; among feasible plain dominance decides."""
    feas_a = viol_a <= 0.0
    feas_b = viol_b <= 0.0
    if feas_a and not feas_b:
        return Dominance.A_DOMINATES_B
    if feas_b and not feas_a:
        return Dominance.B_DOMINATES_A
    if not feas_a and not feas_b:
        if viol_a < viol_b:
            return Dominance.A_DOMINATES_B
        if viol_b < viol_a:
            return Dominance.B_DOMINATES_A
        return Dominance.EQUAL
    return dominates(f_a, f_b)


def scalar_key(f: float, violation: float) -> tuple:
    """Total-order sort key for single-objective constraint-domination
    (smaller is better)."""
    if violation > 0.0:
        return (1, violation, f)
    return (0, f, 0.0)


def _domination_matrix(F: np.ndarray) -> np.ndarray:
    # D[i, j] True iff i dominates j
    less_eq = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    strictly = np.any(F[:, None, :] < F[None, :, :], axis=2)
    return less_eq & strictly


def non_dominated_sort(F, violations=None) -> list[list[int]]:
    """Fast non-dominated sorting into ordered fronts of indices.

    With ``violations`` given, constraint-domination replaces plain dominance.
    """
    try:
        F = np.asarray(F, dtype=float)
    except ValueError as exc:
        raise LengthMismatch("objective vectors of differing lengths") from exc
    if F.ndim != 2:
        F = F.reshape(len(F), -1)
    n = F.shape[0]
    if n == 0:
        return []

    D = _domination_matrix(F)
    if violations is not None:
        v = np.asarray(violations, dtype=float)
        feas = v <= 0.0
        both_infeas = ~feas[:, None] & ~feas[None, :]
        D = np.where(feas[:, None] & ~feas[None, :], True, D)
        D = np.where(~feas[:, None] & feas[None, :], False, D)
        D = np.where(both_infeas, v[:, None] < v[None, :], D)

    n_dominators = D.sum(axis=0)
    fronts: list[list[int]] = []
    remaining = np.ones(n, dtype=bool)
    while remaining.any():
        current = remaining & (n_dominators == 0)
        if not current.any():  # defensive: cycles cannot occur with a partial order
            current = remaining
        idx = np.flatnonzero(current)
        fronts.append(idx.tolist())
        remaining[idx] = False
        n_dominators = n_dominators - D[idx].sum(axis=0)
    return fronts


def crowding_distance(F) -> np.ndarray:
    """NSGA-II crowding distance within one front.

    Per-objective extremes get +inf; interior points the sum of normalized
    neighbor gaps. Fronts of size <= 2 are all +inf. A zero objective range
    contributes 0 for that objective.
    """
    F = np.asarray(F, dtype=float)
    if F.ndim == 1:
        F = F.reshape(-1, 1)
    n, m = F.shape
    if n <= 2:
        return np.full(n, np.inf)
    dist = np.zeros(n)
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable")
        span = F[order[-1], j] - F[order[0], j]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        if span > 0:
            gaps = (F[order[2:], j] - F[order[:-2], j]) / span
            for k, i in enumerate(order[1:-1]):
                dist[i] += gaps[k]
    return dist


def non_dominated_filter(F) -> np.ndarray:
    """Indices of the non-dominated subset of F (minimization)."""
    F = np.asarray(F, dtype=float)
    if len(F) == 0:
        return np.empty(0, dtype=int)
    D = _domination_matrix(F)
    return np.flatnonzero(~D.any(axis=0))
