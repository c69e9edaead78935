"""Generalized surrogate assistance over any ask-tell algorithm.

Two incorporation modes:

* ``bias`` — one surrogate-guided clone of the wrapped algorithm advances
  several generations purely on approximate evaluations; its best, mutually
  distant population members become the expensively evaluated infill points.
* ``knockout`` — several independently seeded clones run the same way; their
  pooled proposals are reduced by a noise-perturbed single-elimination
  tournament that accounts for surrogate error before the infill spend.

Approximate evaluations are unlimited; only the infill points (and the
initial design) touch the expensive budget.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Archive,
    Budget,
    Problem,
    Solution,
    evaluate_approximate,
    evaluate_expensive,
)
from .dominance import (
    constrained_dominates,
    crowding_distance,
    Dominance,
    non_dominated_sort,
    scalar_key,
)
from .errors import (
    AllCandidatesFailed,
    ConfigError,
    DegenerateData,
    LengthMismatch,
    ModelNotFitted,
    SingularSystem,
)
from .sampling import latin_hypercube, scale_to_bounds
from .surrogates import SurrogateEnsemble

MODES = ("bias", "knockout")


@dataclass
class AssistConfig:
    """Knobs of the assistance layer; ``None`` fields resolve to defaults
    that depend on the problem (see :meth:`resolve`)."""

    mode: str = "knockout"
    n_doe: int | None = None
    beta: int = 30
    n_candidates: int = 5
    n_infill: int | None = None
    min_infill_dist: float = 1e-3

    def resolve(self, n_var: int, n_obj: int, ese_max: int) -> "AssistConfig":
        if self.mode not in MODES:
            raise ConfigError(f"assist mode must be one of {MODES}, got {self.mode!r}")
        n_doe = self.n_doe if self.n_doe is not None else min(11 * n_var - 1, ese_max // 2)
        n_doe = max(2, min(n_doe, ese_max))
        n_infill = self.n_infill if self.n_infill is not None else (1 if n_obj == 1 else 5)
        if n_infill < 1 or self.beta < 1 or self.n_candidates < 1:
            raise ConfigError("n_infill, beta and n_candidates must be >= 1")
        if n_doe >= ese_max and self.n_doe is not None:
            raise ConfigError("n_doe must be smaller than the evaluation budget")
        return AssistConfig(
            mode=self.mode,
            n_doe=n_doe,
            beta=self.beta,
            n_candidates=self.n_candidates,
            n_infill=n_infill,
            min_infill_dist=self.min_infill_dist,
        )


@dataclass
class AssistState:
    problem: Problem
    algorithm: object
    config: AssistConfig
    budget: Budget
    archive: Archive
    seed: int
    ensemble: SurrogateEnsemble | None = None
    outer_iteration: int = 0
    fallback_iterations: list = field(default_factory=list)
    on_expensive: object = None  # callback(solution) per genuine archive entry


def _record_new(state: AssistState, before: int) -> None:
    if state.on_expensive is not None:
        for entry in state.archive.entries[before:]:
            state.on_expensive(entry)


def _fit_ensemble(state: AssistState) -> None:
    archive = state.archive
    G = archive.constraint_matrix() if state.problem.spec.n_constr else None
    if state.ensemble is None:
        state.ensemble = SurrogateEnsemble(seed=(state.seed, 4))
        reuse = False
    else:
        reuse = True
    state.ensemble.fit(archive.design_matrix(), archive.objective_matrix(), G,
                       reuse_selection=reuse)


def initialize_doe(problem, config: AssistConfig, seed: int, budget: Budget,
                   archive: Archive, algorithm=None, on_expensive=None) -> AssistState:
    """Latin hypercube design, expensively evaluated, plus the first
    surrogate ensemble fit."""
    config = config.resolve(problem.spec.n_var, problem.spec.n_obj, budget.ese_max)
    state = AssistState(problem, algorithm, config, budget, archive, seed,
                        on_expensive=on_expensive)
    rng = np.random.default_rng([seed, 0])
    unit = latin_hypercube(config.n_doe, problem.spec.n_var, rng)
    designs = [Solution(x=x) for x in scale_to_bounds(unit, problem.spec.lower, problem.spec.upper)]
    before = len(archive)
    evaluated, _ = evaluate_expensive(problem, designs, budget, archive)
    _record_new(state, before)
    if algorithm is not None:
        pop = evaluated[: algorithm.pop_size]
        algorithm.set_population(pop)
        if len(evaluated) > len(pop):
            algorithm.inject(evaluated[len(pop):])
    _fit_ensemble(state)
    return state


def _predicted_quality_order(solutions, n_obj, rng) -> list[int]:
    """Indices ranked best-first by constraint-dominated predicted quality."""
    if n_obj == 1:
        keys = [scalar_key(float(s.f[0]), s.eval.violation) for s in solutions]
        return sorted(range(len(solutions)), key=lambda i: keys[i])
    F = np.array([s.f for s in solutions])
    viols = np.array([s.eval.violation for s in solutions])
    fronts = non_dominated_sort(F, viols)
    order: list[int] = []
    for front in fronts:
        crowd = crowding_distance(F[front])
        tiebreak = rng.random(len(front))
        sub = sorted(range(len(front)), key=lambda k: (-crowd[k], tiebreak[k]))
        order.extend(front[k] for k in sub)
    return order


def _diversity_filter(candidates: list[Solution], ranked: list[int], archive: Archive,
                      spec, min_dist: float, n_keep: int) -> list[Solution]:
    """Greedy best-first selection rejecting near-duplicates of archived or
    already chosen designs (distance in normalized coordinates)."""
    span = spec.upper - spec.lower
    taken = [((e.x - spec.lower) / span) for e in archive.entries]
    chosen: list[Solution] = []
    for i in ranked:
        if len(chosen) >= n_keep:
            break
        z = (candidates[i].x - spec.lower) / span
        if taken and np.min(np.linalg.norm(np.array(taken) - z, axis=1)) < min_dist:
            continue
        chosen.append(candidates[i])
        taken.append(z)
    return chosen


def probabilistic_knockout(predicted_f, uncertainties_f, n_winners: int,
                           rng: np.random.Generator,
                           predicted_g=None, uncertainties_g=None) -> list[int]:
    """Single-elimination selection on noise-perturbed predictions.

    Each match samples one value per contestant from a normal perturbation
    (mean = prediction, stddev = uncertainty); the constraint-dominated winner
    advances, with incomparable or tied pairs decided by a fair coin. Whole
    tournaments repeat on re-shuffled brackets, skipping prior winners, until
    ``n_winners`` accumulate. Returns winner indices in ranking order.
    """
    F = np.atleast_2d(np.asarray(predicted_f, dtype=float))
    if F.shape[0] == 1 and np.asarray(predicted_f).ndim == 1:
        F = F.T
    U = np.broadcast_to(np.asarray(uncertainties_f, dtype=float).reshape(F.shape[0], -1), F.shape)
    if len(F) != len(U):
        raise LengthMismatch("predictions and uncertainties differ in length")
    if predicted_g is not None and np.size(predicted_g):
        G = np.asarray(predicted_g, dtype=float).reshape(len(F), -1)
        U_g = np.broadcast_to(
            np.asarray(uncertainties_g, dtype=float).reshape(len(F), -1), G.shape
        )
    else:
        G = U_g = None

    def sample(i):
        f = F[i] + U[i] * rng.standard_normal(F.shape[1])
        if G is None:
            return f, 0.0
        g = G[i] + U_g[i] * rng.standard_normal(G.shape[1])
        return f, float(np.sum(np.maximum(g, 0.0)))

    def match(i, j):
        f_i, v_i = sample(i)
        f_j, v_j = sample(j)
        rel = constrained_dominates(f_i, v_i, f_j, v_j)
        if rel is Dominance.A_DOMINATES_B:
            return i
        if rel is Dominance.B_DOMINATES_A:
            return j
        return i if rng.random() < 0.5 else j

    winners: list[int] = []
    remaining = list(range(len(F)))
    n_winners = min(n_winners, len(remaining))
    while len(winners) < n_winners:
        bracket = [remaining[k] for k in rng.permutation(len(remaining))]
        while len(bracket) > 1:
            nxt = []
            if len(bracket) % 2 == 1:
                nxt.append(bracket[-1])  # bye
            for a, b in zip(bracket[0:-1:2], bracket[1::2]):
                nxt.append(match(a, b))
            bracket = nxt
        winners.append(bracket[0])
        remaining.remove(bracket[0])
    return winners


def _surrogate_clone(state: AssistState, tag: int) -> object:
    clone = copy.deepcopy(state.algorithm)
    clone.reseed([state.seed, 3, state.outer_iteration, tag])
    members = [Solution(x=s.x.copy()) for s in clone.population]
    evaluate_approximate(state.ensemble, members, state.budget)
    clone.set_population(members)
    for _ in range(state.config.beta):
        offspring = clone.ask()
        evaluate_approximate(state.ensemble, offspring, state.budget)
        clone.tell(offspring)
    return clone


def _fallback_step(state: AssistState) -> None:
    """Model failure: spend the iteration on the wrapped algorithm's own ask."""
    state.fallback_iterations.append(state.outer_iteration)
    offspring = state.algorithm.ask()
    n_spend = min(state.config.n_infill, state.budget.remaining, len(offspring))
    batch = offspring[:n_spend]
    before = len(state.archive)
    evaluated, _ = evaluate_expensive(state.problem, batch, state.budget, state.archive)
    _record_new(state, before)
    state.algorithm.inject(evaluated)


def assisted_step(state: AssistState) -> bool:
    """One outer iteration; returns False once the budget is exhausted."""
    if state.budget.remaining <= 0:
        return False
    cfg = state.config
    spec = state.problem.spec
    rng = np.random.default_rng([state.seed, 2, state.outer_iteration])

    try:
        if state.ensemble is None or not state.ensemble.fitted:
            raise ModelNotFitted("no fitted ensemble")
        if cfg.mode == "bias":
            clone = _surrogate_clone(state, 0)
            pool = list(clone.population)
            ranked = _predicted_quality_order(pool, spec.n_obj, rng)
        else:
            pool = []
            for i in range(cfg.n_candidates):
                clone = _surrogate_clone(state, i)
                pool.extend(clone.population)
            X = np.array([s.x for s in pool])
            F, G, U_f, U_g = state.ensemble.predict(X)
            ranked = probabilistic_knockout(
                F, U_f, min(len(pool), max(3 * cfg.n_infill, cfg.n_infill + 5)),
                rng, predicted_g=G, uncertainties_g=U_g,
            )
        chosen = _diversity_filter(pool, ranked, state.archive, spec,
                                   cfg.min_infill_dist, cfg.n_infill)
        if not chosen:
            raise DegenerateData("all proposals filtered as near-duplicates")
        infill = [Solution(x=spec.clip(s.x)) for s in chosen[: state.budget.remaining]]
        before = len(state.archive)
        evaluated, _ = evaluate_expensive(state.problem, infill, state.budget, state.archive)
        _record_new(state, before)
        state.algorithm.inject(evaluated)
    except (SingularSystem, AllCandidatesFailed, DegenerateData, ModelNotFitted):
        _fallback_step(state)

    try:
        _fit_ensemble(state)
    except (SingularSystem, AllCandidatesFailed, DegenerateData):
        state.ensemble = None

    state.outer_iteration += 1
    return state.budget.remaining > 0
