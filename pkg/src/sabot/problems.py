"""Built-in benchmark problems with known Pareto fronts.

All problems are minimization; constraints use g(x) <= 0. Reference fronts
are sampled evenly in f1 for the ZDT family and on the unit-sphere octant
for DTLZ2.
"""

from __future__ import annotations

import numpy as np

from .core import Problem, ProblemSpec
from .errors import ConfigError, UnknownFront


class BenchmarkProblem(Problem):
    name = "benchmark"

    def reference_front(self, n_points: int) -> np.ndarray:
        raise UnknownFront(f"{self.name} has no closed-form Pareto front")


class Sphere(BenchmarkProblem):
    name = "sphere"

    def __init__(self, n_var: int = 10):
        spec = ProblemSpec(n_var, 1, 0, np.full(n_var, -5.12), np.full(n_var, 5.12))
        super().__init__(spec)

    def _evaluate(self, x):
        return np.array([np.sum(x * x)]), np.empty(0)


class Rastrigin(BenchmarkProblem):
    name = "rastrigin"

    def __init__(self, n_var: int = 10):
        spec = ProblemSpec(n_var, 1, 0, np.full(n_var, -5.12), np.full(n_var, 5.12))
        super().__init__(spec)

    def _evaluate(self, x):
        f = 10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x))
        return np.array([f]), np.empty(0)


class _ZDT(BenchmarkProblem):
    def __init__(self, n_var: int = 30):
        if n_var < 2:
            raise ConfigError("ZDT problems require n_var >= 2")
        spec = ProblemSpec(n_var, 2, 0, np.zeros(n_var), np.ones(n_var))
        super().__init__(spec)

    def _g(self, x):
        return 1.0 + 9.0 * np.sum(x[1:]) / (x.size - 1)


class ZDT1(_ZDT):
    name = "zdt1"

    def _evaluate(self, x):
        f1 = x[0]
        g = self._g(x)
        f2 = g * (1.0 - np.sqrt(f1 / g))
        return np.array([f1, f2]), np.empty(0)

    def reference_front(self, n_points):
        f1 = np.linspace(0.0, 1.0, n_points)
        return np.column_stack([f1, 1.0 - np.sqrt(f1)])


class ZDT2(_ZDT):
    name = "zdt2"

    def _evaluate(self, x):
        f1 = x[0]
        g = self._g(x)
        f2 = g * (1.0 - (f1 / g) ** 2)
        return np.array([f1, f2]), np.empty(0)

    def reference_front(self, n_points):
        f1 = np.linspace(0.0, 1.0, n_points)
        return np.column_stack([f1, 1.0 - f1**2])


class ZDT3(_ZDT):
    name = "zdt3"

    def _evaluate(self, x):
        f1 = x[0]
        g = self._g(x)
        h = f1 / g
        f2 = g * (1.0 - np.sqrt(h) - h * np.sin(10.0 * np.pi * f1))
        return np.array([f1, f2]), np.empty(0)

    def reference_front(self, n_points):
        # the front is disconnected: filter a dense f1 grid through a
        # non-dominance pass instead of hand-maintaining segment boundaries
        f1 = np.linspace(0.0, 1.0, max(20 * n_points, 2000))
        f2 = 1.0 - np.sqrt(f1) - f1 * np.sin(10.0 * np.pi * f1)
        # f1 is strictly increasing, so a point is non-dominated exactly when
        # its f2 undercuts everything to its left (linear sweep)
        prev_best = np.concatenate([[np.inf], np.minimum.accumulate(f2)[:-1]])
        pts = np.column_stack([f1, f2])[f2 < prev_best]
        idx = np.linspace(0, len(pts) - 1, n_points).round().astype(int)
        return pts[idx]


class DTLZ2(BenchmarkProblem):
    name = "dtlz2"

    def __init__(self, n_var: int | None = None, n_obj: int = 2):
        if n_var is None:
            n_var = n_obj + 9
        if n_var < n_obj:
            raise ConfigError("DTLZ2 requires n_var >= n_obj")
        spec = ProblemSpec(n_var, n_obj, 0, np.zeros(n_var), np.ones(n_var))
        super().__init__(spec)

    def _evaluate(self, x):
        m = self.spec.n_obj
        g = np.sum((x[m - 1 :] - 0.5) ** 2)
        f = np.full(m, 1.0 + g)
        theta = x[: m - 1] * np.pi / 2.0
        for i in range(m):
            f[i] *= np.prod(np.cos(theta[: m - 1 - i]))
            if i > 0:
                f[i] *= np.sin(theta[m - 1 - i])
        return f, np.empty(0)

    def reference_front(self, n_points):
        m = self.spec.n_obj
        if m == 2:
            theta = np.linspace(0.0, np.pi / 2.0, n_points)
            return np.column_stack([np.cos(theta), np.sin(theta)])
        from .algorithms import das_dennis_directions

        p = 1
        from math import comb

        while comb(p + m - 1, m - 1) < n_points:
            p += 1
        dirs = das_dennis_directions(m, p)
        dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
        idx = np.linspace(0, len(dirs) - 1, n_points).round().astype(int)
        return dirs[idx]


class BNH(BenchmarkProblem):
    """Binh and Korn's two-objective constrained problem."""

    name = "bnh"

    def __init__(self):
        spec = ProblemSpec(2, 2, 2, np.array([0.0, 0.0]), np.array([5.0, 3.0]))
        super().__init__(spec)

    def _evaluate(self, x):
        x1, x2 = x
        f = np.array([4 * x1**2 + 4 * x2**2, (x1 - 5) ** 2 + (x2 - 5) ** 2])
        g = np.array(
            [
                (x1 - 5) ** 2 + x2**2 - 25.0,
                7.7 - (x1 - 8) ** 2 - (x2 + 3) ** 2,
            ]
        )
        return f, g


_REGISTRY = {
    "sphere": Sphere,
    "rastrigin": Rastrigin,
    "zdt1": ZDT1,
    "zdt2": ZDT2,
    "zdt3": ZDT3,
    "dtlz2": DTLZ2,
    "bnh": BNH,
}


def problem_names() -> list[str]:
    return sorted(_REGISTRY)


def make_problem(name: str, **kwargs) -> BenchmarkProblem:
    try:
        cls = _REGISTRY[name.lower()]
    except KeyError:
        raise ConfigError(f"unknown problem {name!r}; choose from {problem_names()}")
    return cls(**kwargs)
