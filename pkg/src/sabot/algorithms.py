"""Population metaheuristics behind a uniform ask-tell interface.

Each algorithm proposes unevaluated offspring via ``ask`` and ingests their
evaluations via ``tell``, so the assist layer can wrap any of them without
knowing which one it is. ``inject`` applies the algorithm's environmental
selection to an arbitrary-size batch of evaluated solutions (used when
surrogate-selected infill points, rather than the algorithm's own offspring,
enter the population).
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from math import comb

import numpy as np

from .core import ProblemSpec, Solution
from .dominance import (
    constrained_dominates,
    crowding_distance,
    Dominance,
    non_dominated_sort,
    scalar_key,
)
from .errors import ConfigError, StateCorrupt, TellMismatch
from .operators import polynomial_mutation, sbx_crossover


def das_dennis_directions(n_obj: int, n_partitions: int) -> np.ndarray:
    """Structured reference directions on the unit simplex.

    Components come from {0, 1/p, ..., p/p}, each direction sums to 1, and
    the count equals C(p + M - 1, M - 1).
    """
    if n_obj < 2 or n_partitions < 1:
        raise ConfigError("need n_obj >= 2 and n_partitions >= 1")
    out = []
    for cut in combinations_with_replacement(range(n_partitions + 1), n_obj - 1):
        prev = 0
        direction = []
        for c in cut:
            direction.append(c - prev)
            prev = c
        direction.append(n_partitions - prev)
        out.append(direction)
    dirs = np.array(out, dtype=float) / n_partitions
    assert len(dirs) == comb(n_partitions + n_obj - 1, n_obj - 1)
    return dirs


def _violation(sol: Solution) -> float:
    return sol.eval.violation


class AskTellAlgorithm:
    """Base ask-tell state: population, generation counter, seeded rng."""

    name = "base"

    def __init__(self, spec: ProblemSpec, pop_size: int = 100, seed: int = 0):
        self.spec = spec
        self.pop_size = pop_size
        self.rng = np.random.default_rng(seed)
        self.population: list[Solution] = []
        self.generation = 0
        self._pending: set[int] | None = None

    # -- lifecycle -----------------------------------------------------------

    def initial_designs(self) -> list[Solution]:
        """Uniform random designs to seed the population (unevaluated)."""
        X = self.rng.uniform(self.spec.lower, self.spec.upper, size=(self.pop_size, self.spec.n_var))
        return [Solution(x=x) for x in X]

    def set_population(self, evaluated: list[Solution]) -> None:
        self.population = list(evaluated)

    def reseed(self, seed) -> None:
        self.rng = np.random.default_rng(seed)

    # -- ask / tell ----------------------------------------------------------

    def ask(self) -> list[Solution]:
        if any(not s.evaluated for s in self.population):
            raise StateCorrupt("population members lack evaluations")
        offspring = self._variation()
        self._pending = {s.id for s in offspring}
        return offspring

    def tell(self, offspring: list[Solution]) -> None:
        if self._pending is not None and {s.id for s in offspring} != self._pending:
            raise TellMismatch("tell() solutions are not those from the last ask()")
        self._pending = None
        self._survive(offspring)
        self.generation += 1

    def inject(self, evaluated: list[Solution]) -> None:
        self._pending = None
        self._merge(evaluated)
        self.generation += 1

    # -- hooks ---------------------------------------------------------------

    def _variation(self) -> list[Solution]:
        raise NotImplementedError

    def _survive(self, offspring: list[Solution]) -> None:
        raise NotImplementedError

    def _merge(self, extra: list[Solution]) -> None:
        self._survive(extra)

    # -- shared helpers ------------------------------------------------------

    def _mate(self, parent_a: Solution, parent_b: Solution, p_c: float, eta_c: float,
              eta_m: float, p_m: float) -> tuple[Solution, Solution]:
        lo, hi = self.spec.lower, self.spec.upper
        if self.rng.random() < p_c:
            c1, c2 = sbx_crossover(parent_a.x, parent_b.x, eta_c, self.rng, lo, hi)
        else:
            c1, c2 = parent_a.x.copy(), parent_b.x.copy()
        c1 = polynomial_mutation(c1, eta_m, p_m, self.rng, lo, hi)
        c2 = polynomial_mutation(c2, eta_m, p_m, self.rng, lo, hi)
        return Solution(x=c1), Solution(x=c2)


class GeneticAlgorithm(AskTellAlgorithm):
    """Elitist single-objective GA: binary tournament, SBX, polynomial
    mutation, (mu + lambda) truncation under constraint-domination."""

    name = "ga"

    def __init__(self, spec, pop_size=100, seed=0, p_c=0.9, eta_c=15.0, eta_m=20.0, p_m=None):
        super().__init__(spec, pop_size, seed)
        self.p_c = p_c
        self.eta_c = eta_c
        self.eta_m = eta_m
        self.p_m = p_m if p_m is not None else 1.0 / spec.n_var

    def _key(self, sol: Solution):
        return scalar_key(float(sol.f[0]), _violation(sol))

    def _tournament(self) -> Solution:
        i, j = self.rng.integers(len(self.population), size=2)
        a, b = self.population[i], self.population[j]
        if self._key(a) < self._key(b):
            return a
        if self._key(b) < self._key(a):
            return b
        return a if self.rng.random() < 0.5 else b

    def _variation(self):
        offspring = []
        while len(offspring) < self.pop_size:
            c1, c2 = self._mate(self._tournament(), self._tournament(),
                                self.p_c, self.eta_c, self.eta_m, self.p_m)
            offspring.extend([c1, c2])
        return offspring[: self.pop_size]

    def _survive(self, offspring):
        merged = self.population + list(offspring)
        merged.sort(key=self._key)
        self.population = merged[: self.pop_size]


class DifferentialEvolution(AskTellAlgorithm):
    """DE/rand/1/bin with one-to-one parent replacement."""

    name = "de"

    def __init__(self, spec, pop_size=100, seed=0, f_weight=0.5, cr=0.9):
        super().__init__(spec, pop_size, seed)
        self.f_weight = f_weight
        self.cr = cr
        self._parent_idx: list[int] = []

    def _variation(self):
        n = len(self.population)
        d = self.spec.n_var
        offspring = []
        self._parent_idx = []
        for i in range(n):
            choices = [k for k in range(n) if k != i]
            r1, r2, r3 = self.rng.choice(choices, size=3, replace=False)
            mutant = (
                self.population[r1].x
                + self.f_weight * (self.population[r2].x - self.population[r3].x)
            )
            trial = self.population[i].x.copy()
            mask = self.rng.random(d) < self.cr
            if self.cr > 0:
                mask[self.rng.integers(d)] = True
            trial[mask] = mutant[mask]
            trial = np.clip(trial, self.spec.lower, self.spec.upper)
            offspring.append(Solution(x=trial))
            self._parent_idx.append(i)
        return offspring

    def _better(self, child: Solution, parent: Solution) -> bool:
        if self.spec.n_obj == 1:
            ck = scalar_key(float(child.f[0]), _violation(child))
            pk = scalar_key(float(parent.f[0]), _violation(parent))
            return ck <= pk
        rel = constrained_dominates(child.f, _violation(child), parent.f, _violation(parent))
        return rel in (Dominance.A_DOMINATES_B, Dominance.EQUAL)

    def _survive(self, offspring):
        for idx, child in zip(self._parent_idx, offspring):
            if self._better(child, self.population[idx]):
                self.population[idx] = child

    def _merge(self, extra):
        # infill injection: each point challenges the current worst member
        for child in extra:
            if self.spec.n_obj == 1:
                worst = max(
                    range(len(self.population)),
                    key=lambda i: scalar_key(
                        float(self.population[i].f[0]), _violation(self.population[i])
                    ),
                )
            else:
                viols = [_violation(s) for s in self.population]
                fronts = non_dominated_sort([s.f for s in self.population], viols)
                worst = fronts[-1][int(self.rng.integers(len(fronts[-1])))]
            if self._better(child, self.population[worst]):
                self.population[worst] = child


def _ranks_and_crowding(solutions: list[Solution]) -> tuple[np.ndarray, np.ndarray]:
    F = np.array([s.f for s in solutions])
    viols = np.array([_violation(s) for s in solutions])
    fronts = non_dominated_sort(F, viols)
    rank = np.empty(len(solutions), dtype=int)
    crowd = np.empty(len(solutions))
    for r, front in enumerate(fronts):
        rank[front] = r
        crowd[front] = crowding_distance(F[front])
    return rank, crowd


class _ParetoVariationMixin:
    """Tournament + SBX + mutation shared by NSGA-II and NSGA-III."""

    def _rank_tournament(self, rank, crowd) -> int:
        i, j = self.rng.integers(len(self.population), size=2)
        if rank[i] != rank[j]:
            return i if rank[i] < rank[j] else j
        if self.use_crowding and crowd[i] != crowd[j]:
            return i if crowd[i] > crowd[j] else j
        return i if self.rng.random() < 0.5 else j

    def _variation(self):
        rank, crowd = _ranks_and_crowding(self.population)
        offspring = []
        while len(offspring) < self.pop_size:
            a = self.population[self._rank_tournament(rank, crowd)]
            b = self.population[self._rank_tournament(rank, crowd)]
            c1, c2 = self._mate(a, b, self.p_c, self.eta_c, self.eta_m, self.p_m)
            offspring.extend([c1, c2])
        return offspring[: self.pop_size]


class NSGA2(_ParetoVariationMixin, AskTellAlgorithm):
    """NSGA-II: non-dominated sorting plus crowding-distance truncation."""

    name = "nsga2"
    use_crowding = True

    def __init__(self, spec, pop_size=100, seed=0, p_c=0.9, eta_c=15.0, eta_m=20.0, p_m=None):
        super().__init__(spec, pop_size, seed)
        self.p_c = p_c
        self.eta_c = eta_c
        self.eta_m = eta_m
        self.p_m = p_m if p_m is not None else 1.0 / spec.n_var

    def _survive(self, offspring):
        merged = self.population + list(offspring)
        F = np.array([s.f for s in merged])
        viols = np.array([_violation(s) for s in merged])
        fronts = non_dominated_sort(F, viols)
        survivors: list[int] = []
        for front in fronts:
            if len(survivors) + len(front) <= self.pop_size:
                survivors.extend(front)
                continue
            need = self.pop_size - len(survivors)
            crowd = crowding_distance(F[front])
            tiebreak = self.rng.random(len(front))
            order = sorted(range(len(front)), key=lambda k: (-crowd[k], tiebreak[k]))
            survivors.extend(front[k] for k in order[:need])
            break
        self.population = [merged[i] for i in survivors]


def nsga3_survive(
    solutions: list[Solution],
    directions: np.ndarray,
    pop_size: int,
    rng: np.random.Generator,
) -> list[Solution]:
    """NSGA-III environmental selection.

    Non-dominated sort, normalization by the ideal point and extreme-point
    intercepts (falling back to the first front's nadir when the intercept
    system is singular), association of last-front candidates to the nearest
    reference direction by perpendicular distance, and least-crowded-first
    niche filling with seeded random tie-breaks.
    """
    F = np.array([s.f for s in solutions])
    viols = np.array([s.eval.violation for s in solutions])
    fronts = non_dominated_sort(F, viols)

    survivors: list[int] = []
    last_front: list[int] = []
    for front in fronts:
        if len(survivors) + len(front) <= pop_size:
            survivors.extend(front)
            if len(survivors) == pop_size:
                return [solutions[i] for i in survivors]
        else:
            last_front = front
            break
    if not last_front:
        return [solutions[i] for i in survivors]

    considered = survivors + last_front
    Fc = F[considered]
    ideal = Fc.min(axis=0)
    T = Fc - ideal
    m = F.shape[1]

    # extreme points by achievement scalarizing function along each axis
    intercepts = None
    weights = np.full((m, m), 1e-6) + np.eye(m)
    asf = (T[:, None, :] / weights[None, :, :]).max(axis=2)  # (n, m)
    extremes = T[asf.argmin(axis=0)]
    try:
        b = np.linalg.solve(extremes, np.ones(m))
        cand = 1.0 / b
        if np.all(np.isfinite(cand)) and np.all(cand > 1e-12):
            intercepts = cand
    except np.linalg.LinAlgError:
        pass
    if intercepts is None:
        first = F[fronts[0]] - ideal
        intercepts = first.max(axis=0)
    intercepts = np.where(intercepts > 1e-12, intercepts, 1.0)

    N = T / intercepts
    dir_norm = directions / np.linalg.norm(directions, axis=1, keepdims=True)
    proj = N @ dir_norm.T  # (n, n_dir)
    sq = np.sum(N * N, axis=1, keepdims=True)
    perp = np.sqrt(np.maximum(sq - proj**2, 0.0))
    assoc = perp.argmin(axis=1)
    dist = perp[np.arange(len(considered)), assoc]

    niche = np.zeros(len(directions), dtype=int)
    for pos in range(len(survivors)):
        niche[assoc[pos]] += 1

    pool = {}
    for k, idx in enumerate(last_front):
        pos = len(survivors) + k
        pool.setdefault(assoc[pos], []).append((dist[pos], idx))
    for members in pool.values():
        members.sort(key=lambda t: t[0])

    chosen: list[int] = []
    while len(survivors) + len(chosen) < pop_size:
        open_dirs = [d for d in pool if pool[d]]
        counts = np.array([niche[d] for d in open_dirs])
        best = np.flatnonzero(counts == counts.min())
        d = open_dirs[best[int(rng.integers(len(best)))]]
        _, idx = pool[d].pop(0)
        chosen.append(idx)
        niche[d] += 1

    return [solutions[i] for i in survivors + chosen]


class NSGA3(_ParetoVariationMixin, AskTellAlgorithm):
    """NSGA-III: non-dominated sorting plus reference-direction niching."""

    name = "nsga3"
    use_crowding = False

    def __init__(self, spec, pop_size=100, seed=0, p_c=0.9, eta_c=15.0, eta_m=20.0,
                 p_m=None, n_partitions=None):
        super().__init__(spec, pop_size, seed)
        self.p_c = p_c
        self.eta_c = eta_c
        self.eta_m = eta_m
        self.p_m = p_m if p_m is not None else 1.0 / spec.n_var
        if n_partitions is None:
            n_partitions = 1
            while comb(n_partitions + spec.n_obj - 1, spec.n_obj - 1) < pop_size:
                n_partitions += 1
        self.directions = das_dennis_directions(spec.n_obj, n_partitions)

    def _survive(self, offspring):
        merged = self.population + list(offspring)
        self.population = nsga3_survive(merged, self.directions, self.pop_size, self.rng)


_REGISTRY = {
    "ga": GeneticAlgorithm,
    "de": DifferentialEvolution,
    "nsga2": NSGA2,
    "nsga3": NSGA3,
}


def algorithm_names() -> list[str]:
    return sorted(_REGISTRY)


def make_algorithm(name: str, spec: ProblemSpec, pop_size: int, seed: int, **params):
    try:
        cls = _REGISTRY[name.lower()]
    except KeyError:
        raise ConfigError(f"unknown algorithm {name!r}; choose from {algorithm_names()}")
    return cls(spec, pop_size=pop_size, seed=seed, **params)
