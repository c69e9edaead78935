import numpy as np
import pytest


def brute_dominates(a, b):
    """Two-loop reference implementation of Pareto dominance (minimization)."""
    a = list(a)
    b = list(b)
    if a == b:
        return "equal"
    le = all(x <= y for x, y in zip(a, b))
    ge = all(x >= y for x, y in zip(a, b))
    if le:
        return "a"
    if ge:
        return "b"
    return "incomparable"


def brute_non_dominated_sort(F):
    """O(n^2 m) oracle: exhaustive pairwise dominance comparisons, then
    peel fronts by how many still-remaining points dominate each point."""
    F = [list(row) for row in F]
    n = len(F)
    dominators = [[] for _ in range(n)]  # j in dominators[i]: j dominates i
    for i in range(n):
        for j in range(n):
            if i != j and F[i] != F[j] and brute_dominates(F[j], F[i]) == "a":
                dominators[i].append(j)
    remaining = set(range(n))
    fronts = []
    while remaining:
        front = [i for i in remaining if not any(j in remaining for j in dominators[i])]
        fronts.append(sorted(front))
        remaining -= set(front)
    return fronts


class FakeRng:
    """Deterministic stand-in for numpy Generator used to pin operator
    internals (e.g. force u = 0.5 in SBX)."""

    def __init__(self, values):
        self._values = list(values)

    def random(self, size=None):
        v = self._values.pop(0)
        if size is None:
            return v
        return np.full(size, v, dtype=float)

    def integers(self, *a, **k):
        return 0


@pytest.fixture
def rng():
    return np.random.default_rng(42)
