from __future__ import annotations

import math

import pytest

from pcpsolve.enumerate import (
    PrecisionPair,
    decimal_str,
    enumerate_least_norm,
    enumerate_solutions,
    enumerate_sparse,
)
from pcpsolve.errors import CertificationError, DomainError
from pcpsolve.pipeline import (
    HStrategy,
    UnivarRep,
    copositive_solve,
    generate_benchmark,
    least_norm_representation,
    perturb,
    sparse_representation,
    univariate_representation,
)
from pcpsolve.univar import UPoly

from conftest import circle_problem, example_problem, example_strategy

GOLD = ((3 - math.sqrt(5)) / 2, (3 + math.sqrt(5)) / 2)


def _close(a, b, tol=1e-6):
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def test_precision_pair():
    with pytest.raises(DomainError):
        PrecisionPair("1e-4", "1e-6")
    with pytest.raises(DomainError):
        PrecisionPair(0, "1e-6")
    g = PrecisionPair.default()
    assert float(g.gamma1) == 1e-10 and float(g.gamma2) == 1e-6


def test_example_single_solution():
    prob = example_problem()
    rep = univariate_representation(prob, example_strategy())
    sols = enumerate_solutions(rep, prob, PrecisionPair("1e-10", "1e-6"))
    assert len(sols) == 1 and sols[0].coordinates == (1, 1)
    assert len(sols[0].source_roots) == 4
    ln = enumerate_least_norm(least_norm_representation(rep), prob)
    assert [s.coordinates for s in ln] == [(1, 1)]
    k, sp = enumerate_sparse(sparse_representation(rep), prob)
    assert k == 0 and [s.coordinates for s in sp] == [(1, 1)]


def test_p_family_grid():
    prob = generate_benchmark("p", 2, 2)
    rep = least_norm_representation(univariate_representation(prob, HStrategy(seed=5)))
    sols = enumerate_solutions(rep, prob, PrecisionPair.bench())
    grid = [(a, b) for a in range(3) for b in range(3)]
    assert len(sols) == 9
    for s, g in zip(sols, grid):
        assert _close(s.as_floats(), g)
    ln = enumerate_least_norm(rep, prob, PrecisionPair.bench())
    assert len(ln) == 1 and _close(ln[0].as_floats(), (0, 0))
    k, sp = enumerate_sparse(sparse_representation(rep), prob, PrecisionPair.bench())
    assert k == 2 and [s.coordinates for s in sp] == [(0, 0)]


def test_q1_solutions():
    prob = generate_benchmark("q", 1)
    rep = least_norm_representation(univariate_representation(prob, HStrategy(seed=5)))
    sols = enumerate_solutions(rep, prob)
    assert len(sols) == 3
    for s, ref in zip(sols, (0.0,) + GOLD):
        assert abs(s.as_floats()[0] - ref) < 1e-9
    ln = enumerate_least_norm(rep, prob)
    assert [s.as_floats() for s in ln] == [(0.0,)]


def test_solution_error_bounds():
    prob = generate_benchmark("q", 1)
    rep = univariate_representation(prob, HStrategy(seed=5))
    g = PrecisionPair.default()
    for s in enumerate_solutions(rep, prob, g):
        assert all(e <= g.gamma2 / 2 for e in s.errors)
        assert s.min_x >= -g.gamma2 and s.min_f >= -g.gamma2


def test_infeasible_gives_empty():
    from pcpsolve.poly import Ring
    from pcpsolve.pipeline import PCPProblem

    R = Ring(("x1",))
    (x,) = R.gens()
    prob = PCPProblem((-(x**2) - 1,))
    rep = univariate_representation(prob, HStrategy(seed=1))
    assert enumerate_solutions(rep, prob) == []
    assert enumerate_least_norm(least_norm_representation(rep), prob) == []


def test_least_norm_requires_phi():
    prob = example_problem()
    rep = univariate_representation(prob, example_strategy())
    with pytest.raises(DomainError):
        enumerate_least_norm(rep, prob)


def test_bad_representation_fails_certification():
    prob = generate_benchmark("q", 1)
    rep = univariate_representation(prob, HStrategy(seed=5))
    t = UPoly.t()
    broken = UnivarRep(rep.w, (rep.v[0] + 1,), rep.H_used, rep.strategy)
    with pytest.raises(CertificationError):
        enumerate_solutions(broken, prob)
    wrong = UnivarRep(t - 5, (UPoly.const(-3),), rep.H_used, rep.strategy)
    with pytest.raises(CertificationError):
        enumerate_solutions(wrong, prob)


def test_circle_perturbed():
    prob = circle_problem()
    a, rep = copositive_solve(prob, perturbation=("1e-6", "1e-5"), strategy=HStrategy(seed=2))
    sols = enumerate_solutions(rep, perturb(prob, a))
    assert len(sols) == 1
    x = sols[0].as_floats()
    assert math.hypot(x[0] - 1, x[1]) < 1e-3
    assert abs(x[0] - math.sqrt(1 - 1e-6)) < 1e-9


def test_copositive_close_to_unperturbed():
    prob = generate_benchmark("q", 1)
    sols = enumerate_solutions(univariate_representation(prob, HStrategy(seed=1)), prob)
    a, rep = copositive_solve(prob, "1e-6", seed=4, strategy=HStrategy(seed=1))
    pert = enumerate_solutions(rep, perturb(prob, a))
    assert len(pert) == len(sols)
    for s, p in zip(sols, pert):
        assert _close(s.as_floats(), p.as_floats(), 1e-5)


def test_strategies_give_same_solution_sets():
    prob = generate_benchmark("q", 1)
    a = enumerate_solutions(univariate_representation(prob, HStrategy("deterministic")), prob)
    b = enumerate_solutions(univariate_representation(prob, HStrategy(seed=77)), prob)
    assert len(a) == len(b)
    for x, y in zip(a, b):
        assert _close(x.as_floats(), y.as_floats(), 1e-6)


def test_decimal_str():
    from pcpsolve.poly import to_rational

    assert decimal_str(to_rational("1/3"), 5) == "0.33333"
    assert decimal_str(to_rational("-2/3"), 3) == "-0.667"
    assert decimal_str(to_rational("-1e-20"), 4) == "0.0000"
    assert decimal_str(to_rational(12), 2) == "12.00"
