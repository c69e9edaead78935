"""Full optimization runs: plain ask-tell or surrogate-assisted, with a
per-expensive-evaluation history of best-so-far quality."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algorithms import make_algorithm
from .assist import AssistConfig, assisted_step, initialize_doe
from .core import Archive, Budget, Problem, Solution, evaluate_expensive
from .dominance import non_dominated_filter
from .errors import TellMismatch
from .metrics import hypervolume, igd, igd_plus


@dataclass
class HistoryRow:
    ese: int
    best_scalar: float
    indicator: float  # nan when no indicator is configured/computable


class HistoryRecorder:
    """Tracks best-so-far quality after every genuine expensive evaluation.

    Single-objective: best feasible fitness. Multi-objective: hypervolume of
    the feasible non-dominated archive against ``ref_point``. The optional
    indicator column additionally reports ``igd``/``igd_plus`` against a
    reference front or ``hv`` against the reference point.
    """

    def __init__(self, n_obj: int, ref_point=None, indicator: str | None = None,
                 reference_front=None):
        self.n_obj = n_obj
        self.ref_point = np.asarray(ref_point, dtype=float) if ref_point is not None else None
        self.indicator = indicator
        self.reference_front = (
            np.asarray(reference_front, dtype=float) if reference_front is not None else None
        )
        self.rows: list[HistoryRow] = []
        self._best = np.inf
        self._front: list[np.ndarray] = []  # feasible non-dominated objectives

    def _update_front(self, f: np.ndarray) -> None:
        if any(np.all(p <= f) for p in self._front):  # dominated or duplicate
            return
        self._front = [p for p in self._front if not np.all(f <= p)]
        self._front.append(f)

    def front(self) -> np.ndarray:
        return np.array(self._front) if self._front else np.empty((0, self.n_obj))

    def _scalar(self) -> float:
        if self.n_obj == 1:
            return self._best
        if self.ref_point is None or not self._front:
            return float("nan")
        return hypervolume(self.front(), self.ref_point)

    def _indicator_value(self) -> float:
        if self.indicator is None or not self._front:
            return float("nan")
        if self.indicator == "hv":
            if self.ref_point is None:
                return float("nan")
            return hypervolume(self.front(), self.ref_point)
        if self.reference_front is None:
            return float("nan")
        fn = igd if self.indicator == "igd" else igd_plus
        return fn(self.reference_front, self.front())

    def record(self, solution: Solution) -> None:
        if solution.eval.feasible:
            if self.n_obj == 1:
                self._best = min(self._best, float(solution.f[0]))
            else:
                self._update_front(solution.f)
        self.rows.append(HistoryRow(len(self.rows) + 1, self._scalar(), self._indicator_value()))


@dataclass
class RunResult:
    archive: Archive
    budget: Budget
    history: list[HistoryRow]
    front_f: np.ndarray  # final feasible non-dominated objective vectors
    front_x: np.ndarray
    fallback_iterations: list = field(default_factory=list)

    @property
    def final_indicator(self) -> float:
        if not self.history:
            return float("nan")
        last = self.history[-1]
        return last.indicator if np.isfinite(last.indicator) else last.best_scalar


def _final_front(archive: Archive, n_obj: int):
    feasible = [s for s in archive.entries if s.eval.feasible]
    pool = feasible if feasible else list(archive.entries)
    if not pool:
        return np.empty((0, n_obj)), np.empty((0, 0))
    F = np.array([s.f for s in pool])
    idx = non_dominated_filter(F)
    return F[idx], np.array([pool[i].x for i in idx])


def run(
    problem: Problem,
    algorithm: str = "nsga2",
    assist: AssistConfig | None = None,
    ese_max: int = 300,
    seed: int = 0,
    pop_size: int | None = None,
    algorithm_params: dict | None = None,
    indicator: str | None = None,
    ref_point=None,
    n_reference: int = 1000,
) -> RunResult:
    """Execute one budgeted run and return its archive, front, and history."""
    spec = problem.spec
    if pop_size is None:
        pop_size = 20 if assist is not None else 100
    budget = Budget(ese_max=ese_max)
    archive = Archive()

    reference_front = None
    if spec.n_obj > 1:
        try:
            reference_front = problem.reference_front(n_reference)
        except Exception:
            reference_front = None
        if ref_point is None and reference_front is not None:
            ref_point = 1.1 * reference_front.max(axis=0)
    recorder = HistoryRecorder(spec.n_obj, ref_point=ref_point, indicator=indicator,
                               reference_front=reference_front)

    algo = make_algorithm(algorithm, spec, pop_size=pop_size, seed=[seed, 1],
                          **(algorithm_params or {}))

    if assist is not None:
        state = initialize_doe(problem, assist, seed, budget, archive,
                               algorithm=algo, on_expensive=recorder.record)
        while assisted_step(state):
            pass
        fallbacks = state.fallback_iterations
    else:
        fallbacks = []
        designs = algo.initial_designs()
        before = len(archive)
        evaluated, _ = evaluate_expensive(problem, designs, budget, archive)
        for entry in archive.entries[before:]:
            recorder.record(entry)
        algo.set_population(evaluated)
        while budget.remaining > 0:
            offspring = algo.ask()
            before = len(archive)
            evaluated, truncated = evaluate_expensive(problem, offspring, budget, archive)
            for entry in archive.entries[before:]:
                recorder.record(entry)
            try:
                algo.tell(evaluated)
            except TellMismatch:
                algo.inject(evaluated)  # truncated final batch

    front_f, front_x = _final_front(archive, spec.n_obj)
    return RunResult(archive, budget, recorder.rows, front_f, front_x, fallbacks)
