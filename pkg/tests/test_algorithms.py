from math import comb

import numpy as np
import pytest

from conftest import brute_non_dominated_sort

from sabot import (
    Archive,
    Budget,
    Evaluation,
    Provenance,
    Solution,
    crowding_distance,
    das_dennis_directions,
    evaluate_expensive,
    make_algorithm,
    make_problem,
    non_dominated_sort,
    nsga3_survive,
)
from sabot.errors import LengthMismatch, StateCorrupt, TellMismatch


def evaluated_solution(f, g=(), x=None):
    return Solution(
        x=np.zeros(2) if x is None else np.asarray(x, dtype=float),
        eval=Evaluation(f=np.atleast_1d(f), g=np.asarray(g), provenance=Provenance.EXPENSIVE),
    )


def fresh(problem, algorithm, seed=0, pop_size=20, **params):
    algo = make_algorithm(algorithm, problem.spec, pop_size=pop_size, seed=seed, **params)
    budget = Budget(ese_max=10_000)
    archive = Archive()
    evaluated, _ = evaluate_expensive(problem, algo.initial_designs(), budget, archive)
    algo.set_population(evaluated)
    return algo, budget, archive


# -- non-dominated sort ------------------------------------------------------


def test_sort_singleton():
    assert non_dominated_sort([(1, 1)]) == [[0]]


def test_sort_two_front_example():
    assert non_dominated_sort([(1, 2), (2, 1), (2, 2)]) == [[0, 1], [2]]


def test_sort_total_chain():
    assert non_dominated_sort([(0, 0), (1, 1), (2, 2)]) == [[0], [1], [2]]


def test_sort_raises_on_ragged_input():
    with pytest.raises(LengthMismatch):
        non_dominated_sort([(1, 2), (1, 2, 3)])


def test_sort_matches_bruteforce_oracle(rng):
    for _ in range(200):
        n = int(rng.integers(1, 30))
        m = int(rng.integers(2, 5))
        F = rng.integers(0, 6, size=(n, m)).astype(float)
        got = [sorted(f) for f in non_dominated_sort(F)]
        want = [sorted(f) for f in brute_non_dominated_sort(F)]
        assert got == want


# -- crowding ----------------------------------------------------------------


def test_crowding_two_points_all_infinite():
    assert np.all(np.isinf(crowding_distance([(0, 1), (1, 0)])))


def test_crowding_hand_example():
    d = crowding_distance([(0, 1), (0.5, 0.5), (1, 0)])
    assert np.isinf(d[0]) and np.isinf(d[2])
    assert d[1] == pytest.approx(2.0)


def test_crowding_identical_vectors_degenerate_range():
    d = crowding_distance([(1.0, 1.0), (1.0, 1.0), (1.0, 1.0)])
    # stable index tie-break: first and last sorted positions get +inf
    assert np.isinf(d[0]) and np.isinf(d[2])
    assert d[1] == 0.0


# -- reference directions ----------------------------------------------------


def test_das_dennis_m2_p2():
    dirs = das_dennis_directions(2, 2)
    assert len(dirs) == 3
    assert {tuple(d) for d in dirs} == {(1.0, 0.0), (0.5, 0.5), (0.0, 1.0)}


def test_das_dennis_m3_p1_unit_vectors():
    dirs = das_dennis_directions(3, 1)
    assert len(dirs) == comb(3, 2)
    assert {tuple(d) for d in dirs} == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_das_dennis_counts_and_sums():
    for m in (2, 3, 5):
        for p in range(1, 13):
            dirs = das_dennis_directions(m, p)
            assert len(dirs) == comb(p + m - 1, m - 1)
            assert np.allclose(dirs.sum(axis=1), 1.0, atol=1e-12)
            assert len({tuple(d) for d in dirs}) == len(dirs)


# -- ask/tell contracts ------------------------------------------------------


@pytest.mark.parametrize("name", ["ga", "de", "nsga2", "nsga3"])
def test_ask_produces_in_bounds_offspring(name):
    problem = make_problem("zdt1", n_var=5) if name.startswith("nsga") else make_problem("sphere", n_var=5)
    algo, _, _ = fresh(problem, name, seed=1)
    offspring = algo.ask()
    assert len(offspring) == algo.pop_size
    for s in offspring:
        assert problem.spec.contains(s.x)
        assert s.eval is None


@pytest.mark.parametrize("name", ["ga", "de", "nsga2", "nsga3"])
def test_ask_is_deterministic_for_equal_seeds(name):
    problem = make_problem("zdt1", n_var=5) if name.startswith("nsga") else make_problem("sphere", n_var=5)
    a, _, _ = fresh(problem, name, seed=9)
    b, _, _ = fresh(problem, name, seed=9)
    for sa, sb in zip(a.ask(), b.ask()):
        assert np.array_equal(sa.x, sb.x)


@pytest.mark.parametrize("name", ["ga", "de", "nsga2", "nsga3"])
def test_round_trip_preserves_population_size(name):
    problem = make_problem("zdt1", n_var=4) if name.startswith("nsga") else make_problem("sphere", n_var=4)
    algo, budget, archive = fresh(problem, name, seed=3, pop_size=12)
    for _ in range(25):
        offspring = algo.ask()
        evaluated, _ = evaluate_expensive(problem, offspring, budget, archive)
        algo.tell(evaluated)
        assert len(algo.population) == 12
        assert all(s.evaluated for s in algo.population)


def test_ask_rejects_unevaluated_population():
    problem = make_problem("sphere", n_var=3)
    algo = make_algorithm("ga", problem.spec, pop_size=5, seed=0)
    algo.set_population(algo.initial_designs())
    with pytest.raises(StateCorrupt):
        algo.ask()


def test_tell_rejects_foreign_offspring():
    problem = make_problem("sphere", n_var=3)
    algo, budget, archive = fresh(problem, "ga", seed=0, pop_size=6)
    algo.ask()
    strangers = [evaluated_solution([1.0], x=np.zeros(3)) for _ in range(6)]
    with pytest.raises(TellMismatch):
        algo.tell(strangers)


def test_de_degenerate_operator_returns_parents():
    problem = make_problem("sphere", n_var=4)
    algo, _, _ = fresh(problem, "de", seed=5, pop_size=8, f_weight=0.0, cr=0.0)
    parents = [s.x.copy() for s in algo.population]
    offspring = algo.ask()
    for p, c in zip(parents, offspring):
        assert np.array_equal(p, c.x)


def test_de_keeps_parent_when_offspring_worse():
    problem = make_problem("sphere", n_var=3)
    algo, budget, archive = fresh(problem, "de", seed=2, pop_size=6)
    parents = list(algo.population)
    offspring = algo.ask()
    # force every child to be terrible
    for s in offspring:
        s.eval = Evaluation(f=[1e9], g=[], provenance=Provenance.EXPENSIVE)
    algo.tell(offspring)
    assert algo.population == parents


def test_ga_best_fitness_non_increasing():
    problem = make_problem("sphere", n_var=10)
    algo, budget, archive = fresh(problem, "ga", seed=11, pop_size=20)
    best = min(float(s.f[0]) for s in algo.population)
    for _ in range(30):
        offspring = algo.ask()
        evaluated, _ = evaluate_expensive(problem, offspring, budget, archive)
        algo.tell(evaluated)
        new_best = min(float(s.f[0]) for s in algo.population)
        assert new_best <= best
        best = new_best


def test_de_best_fitness_non_increasing():
    problem = make_problem("sphere", n_var=10)
    algo, budget, archive = fresh(problem, "de", seed=13, pop_size=20)
    best = min(float(s.f[0]) for s in algo.population)
    for _ in range(30):
        offspring = algo.ask()
        evaluated, _ = evaluate_expensive(problem, offspring, budget, archive)
        algo.tell(evaluated)
        new_best = min(float(s.f[0]) for s in algo.population)
        assert new_best <= best
        best = new_best


# -- NSGA-II survival --------------------------------------------------------


def test_nsga2_survivors_match_bruteforce_selection():
    problem = make_problem("zdt1", n_var=3)
    algo = make_algorithm("nsga2", problem.spec, pop_size=4, seed=0)
    # 4 non-dominated + front-2 remainder
    first = [(0.0, 1.0), (0.3, 0.6), (0.6, 0.3), (1.0, 0.0)]
    second = [(0.5, 1.5), (1.5, 0.5), (1.2, 1.2)]
    merged = [evaluated_solution(f) for f in first + second]
    algo.set_population([])
    algo.inject(merged)
    survivors = {tuple(s.f) for s in algo.population}
    assert survivors == set(first)


def test_nsga2_last_front_picked_by_crowding():
    problem = make_problem("zdt1", n_var=3)
    algo = make_algorithm("nsga2", problem.spec, pop_size=3, seed=0)
    # one non-dominated point + front 2 of four points; crowding keeps extremes
    pts = [(0.0, 0.0)] + [(1.0, 4.0), (2.0, 3.0), (2.1, 2.9), (4.0, 1.0)]
    algo.set_population([])
    algo.inject([evaluated_solution(f) for f in pts])
    survivors = {tuple(s.f) for s in algo.population}
    assert (0.0, 0.0) in survivors
    assert (1.0, 4.0) in survivors and (4.0, 1.0) in survivors


# -- NSGA-III survival -------------------------------------------------------


def test_nsga3_exact_fit_returned_unchanged(rng):
    dirs = das_dennis_directions(2, 4)
    sols = [evaluated_solution(f) for f in [(0.0, 1.0), (0.5, 0.5), (1.0, 0.0)]]
    out = nsga3_survive(sols, dirs, 3, rng)
    assert {tuple(s.f) for s in out} == {tuple(s.f) for s in sols}


def test_nsga3_single_direction_prefers_small_perpendicular_distance(rng):
    # all candidates on front 2 associate with the lone direction (1,1)/2;
    # the point closest to that line must be selected first
    dirs = np.array([[0.5, 0.5]])
    sols = [evaluated_solution(f) for f in [(0.0, 0.0), (1.0, 3.0), (1.9, 2.1), (3.0, 1.2)]]
    out = nsga3_survive(sols, dirs, 2, rng)
    chosen = {tuple(s.f) for s in out}
    assert (0.0, 0.0) in chosen
    assert (1.9, 2.1) in chosen  # nearest to the diagonal among front 2


def test_nsga3_survival_deterministic_for_equal_seed():
    dirs = das_dennis_directions(2, 6)
    pts = np.random.default_rng(0).random((20, 2))
    sols = [evaluated_solution(f) for f in pts]
    a = nsga3_survive(sols, dirs, 8, np.random.default_rng(77))
    b = nsga3_survive(sols, dirs, 8, np.random.default_rng(77))
    assert [s.id for s in a] == [s.id for s in b]
