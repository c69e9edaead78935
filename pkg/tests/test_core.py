import numpy as np
import pytest

from conftest import brute_dominates

from sabot import (
    Archive,
    Budget,
    Dominance,
    Evaluation,
    ProblemSpec,
    Provenance,
    Solution,
    dominates,
    evaluate_approximate,
    evaluate_expensive,
    make_problem,
)
from sabot.errors import BudgetExhausted, LengthMismatch, ModelNotFitted, OutOfBounds


def solutions_for(problem, X):
    return [Solution(x=np.asarray(x, dtype=float)) for x in X]


def test_budget_counts_batch_of_distinct_designs(rng):
    problem = make_problem("sphere", n_var=3)
    budget = Budget(ese_max=300)
    archive = Archive()
    X = rng.uniform(-5, 5, size=(20, 3))
    evaluated, truncated = evaluate_expensive(problem, solutions_for(problem, X), budget, archive)
    assert budget.ese_used == 20
    assert len(archive) == 20
    assert not truncated
    assert all(s.eval.provenance is Provenance.EXPENSIVE for s in evaluated)


def test_batch_truncated_at_budget(rng):
    problem = make_problem("sphere", n_var=3)
    budget = Budget(ese_max=300, ese_used=295)
    archive = Archive()
    X = rng.uniform(-5, 5, size=(20, 3))
    evaluated, truncated = evaluate_expensive(problem, solutions_for(problem, X), budget, archive)
    assert truncated
    assert len(evaluated) == 5
    assert budget.ese_used == 300


def test_duplicate_design_reuses_archived_evaluation(rng):
    problem = make_problem("sphere", n_var=3)
    budget = Budget(ese_max=10)
    archive = Archive()
    x = rng.uniform(-5, 5, size=3)
    evaluate_expensive(problem, [Solution(x=x.copy())], budget, archive)
    dup = Solution(x=x.copy())
    evaluate_expensive(problem, [dup], budget, archive)
    assert budget.ese_used == 1
    assert len(archive) == 1
    assert archive.duplicate_reuses == 1
    assert dup.eval is archive.entries[0].eval
    assert problem.n_calls == 1


def test_exhausted_budget_raises():
    problem = make_problem("sphere", n_var=2)
    budget = Budget(ese_max=1, ese_used=1)
    with pytest.raises(BudgetExhausted):
        evaluate_expensive(problem, [Solution(x=np.zeros(2))], budget, Archive())


def test_out_of_bounds_raises():
    problem = make_problem("sphere", n_var=2)
    with pytest.raises(OutOfBounds):
        evaluate_expensive(problem, [Solution(x=np.array([99.0, 0.0]))], Budget(5), Archive())


def test_counters_monotone_and_capped(rng):
    problem = make_problem("sphere", n_var=2)
    budget = Budget(ese_max=17)
    archive = Archive()
    prev = 0
    while budget.remaining > 0:
        n = int(rng.integers(1, 6))
        X = rng.uniform(-5, 5, size=(n, 2))
        evaluate_expensive(problem, solutions_for(problem, X), budget, archive)
        assert budget.ese_used >= prev
        assert budget.ese_used <= budget.ese_max
        assert len(archive) == budget.ese_used
        prev = budget.ese_used
    assert budget.ese_used == 17


class _StubEnsemble:
    fitted = True

    def predict(self, X):
        F = np.sum(X**2, axis=1, keepdims=True)
        return F, None, np.zeros_like(F), None


def test_evaluate_approximate_accounting():
    budget = Budget(ese_max=5)
    sols = [Solution(x=np.array([1.0, 2.0])) for _ in range(50)]
    evaluate_approximate(_StubEnsemble(), sols, budget)
    assert budget.ase_used == 50
    assert budget.ese_used == 0
    assert all(s.eval.provenance is Provenance.APPROXIMATE for s in sols)
    assert sols[0].f[0] == pytest.approx(5.0)


def test_evaluate_approximate_empty_batch():
    budget = Budget(ese_max=5)
    assert evaluate_approximate(_StubEnsemble(), [], budget) == []
    assert budget.ase_used == 0


def test_evaluate_approximate_requires_fitted_model():
    class Unfitted:
        fitted = False

    with pytest.raises(ModelNotFitted):
        evaluate_approximate(Unfitted(), [Solution(x=np.zeros(2))], Budget(5))


def test_dominates_examples():
    assert dominates((1, 2), (2, 3)) is Dominance.A_DOMINATES_B
    assert dominates((1, 2), (1, 2)) is Dominance.EQUAL
    assert dominates((1, 3), (2, 1)) is Dominance.INCOMPARABLE
    with pytest.raises(LengthMismatch):
        dominates((1, 2), (1, 2, 3))


def test_dominates_matches_two_loop_oracle(rng):
    mapping = {
        Dominance.A_DOMINATES_B: "a",
        Dominance.B_DOMINATES_A: "b",
        Dominance.INCOMPARABLE: "incomparable",
        Dominance.EQUAL: "equal",
    }
    for _ in range(1000):
        m = int(rng.choice([2, 3, 4]))
        a = rng.integers(0, 4, size=m).astype(float)
        b = rng.integers(0, 4, size=m).astype(float)
        rel = dominates(a, b)
        assert mapping[rel] == brute_dominates(a, b)
        # antisymmetry
        flipped = dominates(b, a)
        if rel is Dominance.A_DOMINATES_B:
            assert flipped is Dominance.B_DOMINATES_A
        if rel is Dominance.EQUAL:
            assert flipped is Dominance.EQUAL


def test_archive_rejects_approximate_entries():
    archive = Archive()
    s = Solution(x=np.zeros(2), eval=Evaluation(f=[1.0], g=[], provenance=Provenance.APPROXIMATE))
    with pytest.raises(ValueError):
        archive.add(s)


def test_problem_spec_validation():
    with pytest.raises(ValueError):
        ProblemSpec(2, 1, 0, np.array([0.0, 1.0]), np.array([1.0, 1.0]))
    spec = ProblemSpec(2, 1, 0, np.zeros(2), np.ones(2))
    assert spec.contains(np.array([0.5, 0.5]))
    assert not spec.contains(np.array([1.5, 0.5]))
