"""Problem abstraction, solution/archive data model, and budget-enforced evaluation.

Every expensive call is routed through :func:`evaluate_expensive`, which is the
single place where the evaluation budget is charged and the archive grows.
Surrogate predictions go through :func:`evaluate_approximate` and only bump the
informational ASE counter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExhausted, ModelNotFitted, OutOfBounds


class Provenance(Enum):
    EXPENSIVE = "expensive"
    APPROXIMATE = "approximate"


@dataclass
class Budget:
    """Counters for expensive (budgeted) and approximate (free) evaluations.

    ``ese_used`` may never exceed ``ese_max``; ``ase_used`` is informational
    only and never gates anything.
    """

    ese_max: int
    ese_used: int = 0
    ase_used: int = 0

    def __post_init__(self):
        if self.ese_max <= 0:
            raise ValueError("ese_max must be a positive integer")

    @property
    def remaining(self) -> int:
        return self.ese_max - self.ese_used

    @property
    def exhausted(self) -> bool:
        return self.ese_used >= self.ese_max

    def charge_expensive(self, n: int) -> None:
        if self.ese_used + n > self.ese_max:
            raise BudgetExhausted(
                f"charging {n} expensive evaluations would exceed "
                f"{self.ese_max} (used {self.ese_used})"
            )
        self.ese_used += n

    def charge_approximate(self, n: int) -> None:
        self.ase_used += n


@dataclass
class ProblemSpec:
    """Box-bounded black-box problem signature."""

    n_var: int
    n_obj: int
    n_constr: int
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if self.n_var <= 0 or self.n_obj < 1 or self.n_constr < 0:
            raise ValueError("invalid problem dimensions")
        if self.lower.shape != (self.n_var,) or self.upper.shape != (self.n_var,):
            raise ValueError("bounds must have shape (n_var,)")
        if not np.all(self.lower < self.upper):
            raise ValueError("lower bounds must be strictly below upper bounds")

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)


@dataclass
class Evaluation:
    """Objective/constraint values plus where they came from.

    Constraints use the g(x) <= 0 feasibility convention.
    """

    f: np.ndarray
    g: np.ndarray
    provenance: Provenance

    def __post_init__(self):
        self.f = np.atleast_1d(np.asarray(self.f, dtype=float))
        self.g = np.atleast_1d(np.asarray(self.g, dtype=float)) if np.size(self.g) else np.empty(0)

    @property
    def feasible(self) -> bool:
        return self.g.size == 0 or bool(np.all(self.g <= 0.0))

    @property
    def violation(self) -> float:
        if self.g.size == 0:
            return 0.0
        return float(np.sum(np.maximum(self.g, 0.0)))


_id_counter = itertools.count()


@dataclass
class Solution:
    """A design vector with an optional evaluation and a run-unique id."""

    x: np.ndarray
    eval: Optional[Evaluation] = None
    id: int = field(default_factory=lambda: next(_id_counter))

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)

    @property
    def evaluated(self) -> bool:
        return self.eval is not None

    @property
    def f(self) -> np.ndarray:
        return self.eval.f

    @property
    def g(self) -> np.ndarray:
        return self.eval.g


class Archive:
    """All expensively evaluated solutions; sole training data for surrogates.

    Entries are deduplicated by exact componentwise equality of the design
    vector, so archive size always equals the budget's ese_used.
    """

    def __init__(self):
        self.entries: list[Solution] = []
        self._by_x: dict[bytes, Solution] = {}
        self.duplicate_reuses: int = 0

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def lookup(self, x: np.ndarray) -> Optional[Solution]:
        return self._by_x.get(np.asarray(x, dtype=float).tobytes())

    def add(self, solution: Solution) -> None:
        if solution.eval is None or solution.eval.provenance is not Provenance.EXPENSIVE:
            raise ValueError("archive entries must carry expensive evaluations")
        key = solution.x.tobytes()
        if key in self._by_x:
            raise ValueError("duplicate design vector in archive")
        self._by_x[key] = solution
        self.entries.append(solution)

    def design_matrix(self) -> np.ndarray:
        return np.array([s.x for s in self.entries])

    def objective_matrix(self) -> np.ndarray:
        return np.array([s.f for s in self.entries])

    def constraint_matrix(self) -> np.ndarray:
        return np.array([s.g for s in self.entries]).reshape(len(self.entries), -1)


class Problem:
    """Black-box problem: a spec plus an expensive evaluator for one design."""

    def __init__(self, spec: ProblemSpec):
        self.spec = spec
        self.n_calls = 0  # instrumentation: genuine expensive calls

    def evaluate(self, x: np.ndarray) -> Evaluation:
        self.n_calls += 1
        f, g = self._evaluate(np.asarray(x, dtype=float))
        return Evaluation(f=f, g=g, provenance=Provenance.EXPENSIVE)

    def _evaluate(self, x: np.ndarray):
        raise NotImplementedError

    def close(self) -> None:
        pass


class FunctionProblem(Problem):
    """Adapter turning a plain callable ``x -> (f, g)`` into a Problem."""

    def __init__(self, spec: ProblemSpec, func):
        super().__init__(spec)
        self._func = func

    def _evaluate(self, x):
        out = self._func(x)
        if isinstance(out, tuple):
            return out
        return out, np.empty(0)


def evaluate_expensive(
    problem: Problem,
    solutions: Sequence[Solution],
    budget: Budget,
    archive: Archive,
) -> tuple[list[Solution], bool]:
    """Expensively evaluate a batch, charging the budget and feeding the archive.

    Designs identical to an archived entry reuse the stored evaluation for
    free. If the batch would overrun the remaining budget it is truncated in
    input order; the returned flag reports whether truncation happened.

    Raises BudgetExhausted when no budget remains on entry, OutOfBounds when
    any design violates the box bounds.
    """
    if budget.remaining <= 0:
        raise BudgetExhausted(f"budget of {budget.ese_max} expensive evaluations spent")
    for s in solutions:
        if not problem.spec.contains(s.x):
            raise OutOfBounds(f"design {s.x} outside [{problem.spec.lower}, {problem.spec.upper}]")

    evaluated: list[Solution] = []
    truncated = False
    for s in solutions:
        cached = archive.lookup(s.x)
        if cached is not None:
            s.eval = cached.eval
            archive.duplicate_reuses += 1
            evaluated.append(s)
            continue
        if budget.remaining <= 0:
            truncated = True
            break
        s.eval = problem.evaluate(s.x)
        budget.charge_expensive(1)
        archive.add(s)
        evaluated.append(s)
    return evaluated, truncated


def evaluate_approximate(surrogates, solutions: Sequence[Solution], budget: Budget) -> list[Solution]:
    """Attach surrogate evaluations to a batch; only bumps the ASE counter."""
    if surrogates is None or not getattr(surrogates, "fitted", False):
        raise ModelNotFitted("surrogate ensemble is not fitted for all outputs")
    solutions = list(solutions)
    if not solutions:
        return solutions
    X = np.array([s.x for s in solutions])
    F, G, _, _ = surrogates.predict(X)
    for i, s in enumerate(solutions):
        g = G[i] if G is not None else np.empty(0)
        s.eval = Evaluation(f=F[i], g=g, provenance=Provenance.APPROXIMATE)
    budget.charge_approximate(len(solutions))
    return solutions
