import numpy as np
import pytest

from sabot import dominates, Dominance, make_problem
from sabot.errors import ConfigError, UnknownFront


def f_of(problem, x):
    return problem.evaluate(np.asarray(x, dtype=float)).f


def test_sphere_optimum_at_origin():
    p = make_problem("sphere", n_var=5)
    assert f_of(p, np.zeros(5)) == pytest.approx([0.0])


def test_rastrigin_optimum_at_origin():
    p = make_problem("rastrigin", n_var=4)
    assert f_of(p, np.zeros(4)) == pytest.approx([0.0])


def test_zdt1_hand_evaluations():
    p = make_problem("zdt1", n_var=30)
    assert f_of(p, np.zeros(30)) == pytest.approx([0.0, 1.0])
    p2 = make_problem("zdt1", n_var=2)
    # g = 1 + 9*1 = 10, f2 = 10*(1 - sqrt(1/10))
    expected = 10.0 * (1.0 - np.sqrt(0.1))
    assert f_of(p2, [1.0, 1.0]) == pytest.approx([1.0, expected])
    assert expected == pytest.approx(6.8377223398)


def test_bnh_hand_evaluation():
    # published Binh-Korn formulas evaluated by hand at the origin:
    # f1 = 0, f2 = (0-5)^2 + (0-5)^2 = 50
    # g1 = (0-5)^2 + 0 - 25 = 0 (boundary-feasible), g2 = 7.7 - 64 - 9 < 0
    p = make_problem("bnh")
    e = p.evaluate(np.zeros(2))
    assert e.f == pytest.approx([0.0, 50.0])
    assert e.feasible
    assert e.g[0] == pytest.approx(0.0)
    assert e.g[1] < 0


def test_zdt_requires_two_variables():
    with pytest.raises(ConfigError):
        make_problem("zdt1", n_var=1)


def test_dtlz2_requires_enough_variables():
    with pytest.raises(ConfigError):
        make_problem("dtlz2", n_var=1, n_obj=3)


def test_zdt1_reference_front_three_points():
    front = make_problem("zdt1").reference_front(3)
    assert front == pytest.approx(np.array([[0, 1], [0.5, 1 - np.sqrt(0.5)], [1, 0]]))


def test_zdt2_front_endpoints():
    front = make_problem("zdt2").reference_front(11)
    assert front[0] == pytest.approx([0.0, 1.0])
    assert front[-1] == pytest.approx([1.0, 0.0])


def test_dtlz2_front_on_unit_sphere():
    for n_obj in (2, 3):
        front = make_problem("dtlz2", n_obj=n_obj).reference_front(50)
        assert np.linalg.norm(front, axis=1) == pytest.approx(np.ones(len(front)))


def test_reference_fronts_are_mutually_non_dominated():
    for name in ("zdt1", "zdt2", "zdt3"):
        front = make_problem(name).reference_front(60)
        for i in range(len(front)):
            for j in range(len(front)):
                if i != j:
                    assert dominates(front[i], front[j]) in (
                        Dominance.INCOMPARABLE,
                        Dominance.EQUAL,
                    )


def test_bnh_has_no_closed_form_front():
    with pytest.raises(UnknownFront):
        make_problem("bnh").reference_front(10)


def test_evaluation_is_pure(rng):
    for name, kw in (("zdt3", {"n_var": 5}), ("dtlz2", {"n_obj": 3}), ("bnh", {})):
        p = make_problem(name, **kw)
        x = rng.uniform(p.spec.lower, p.spec.upper)
        a, b = p.evaluate(x), p.evaluate(x)
        assert np.array_equal(a.f, b.f) and np.array_equal(a.g, b.g)


def test_zdt_points_with_tail_zero_lie_on_front(rng):
    for name in ("zdt1", "zdt2"):
        p = make_problem(name, n_var=6)
        front = p.reference_front(10001)
        for _ in range(20):
            x = np.zeros(6)
            x[0] = rng.random()
            f = p.evaluate(x).f
            # closed-form front relation
            f2 = 1 - np.sqrt(f[0]) if name == "zdt1" else 1 - f[0] ** 2
            assert abs(f[1] - f2) < 1e-12
        del front


def test_unknown_problem_name():
    with pytest.raises(ConfigError):
        make_problem("nope")
