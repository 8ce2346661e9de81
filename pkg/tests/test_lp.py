import random
from dataclasses import replace
from fractions import Fraction

import pytest

from expord.exactnum import DimensionMismatch, RatMatrix
from expord.lp import LpProblem, Sense, Status, check_certificate, feasibility, solve_lp

from conftest import E1_ROWS


def test_trivial_optimum():
    out = solve_lp(LpProblem.build([1], [[1]], [1]))
    assert out.status is Status.OPTIMAL
    assert out.value == 1
    assert check_certificate(LpProblem.build([1], [[1]], [1]), out)


def test_min_lambda_with_slacks():
    # variables (λ, s1, s2): 1 + λ − s1 = 0, −1 + λ − s2 = 0
    p = LpProblem.build([1, 0, 0], [[1, -1, 0], [1, 0, -1]], [-1, 1],
                        bounds=[(None, None), (0, None), (0, None)])
    out = solve_lp(p)
    assert out.status is Status.OPTIMAL
    assert out.x[0] == 1
    assert check_certificate(p, out)


def test_cone_infeasibility_certificate():
    E1 = RatMatrix.from_rows(E1_ROWS)
    b = (Fraction(1, 2), Fraction(1, 10))
    out = feasibility(E1, b, ((0, None), (0, None)))
    assert out.status is Status.INFEASIBLE
    y = out.farkas
    assert all(x <= 0 for x in E1.vecmat(y))
    assert y[0] * b[0] + y[1] * b[1] > 0


def test_unbounded_ray():
    p = LpProblem.build([-1, 0], [[1, -1]], [0])
    out = solve_lp(p)
    assert out.status is Status.UNBOUNDED
    assert check_certificate(p, out)


def test_maximize_with_box():
    p = LpProblem.build([1, 2], [[1, 1]], [3], bounds=[(0, 2), (0, 2)], sense=Sense.MAX)
    out = solve_lp(p)
    assert out.value == 5 and out.x == (1, 2)
    assert check_certificate(p, out)


def test_tampered_certificates_rejected():
    p = LpProblem.build([1, 1], [[1, 2]], [4])
    out = solve_lp(p)
    bad = replace(out, x=(out.x[0] + 1,) + out.x[1:])
    assert check_certificate(p, out) and not check_certificate(p, bad)

    q = LpProblem.build([0, 0], [[1, 1]], [-1])
    inf = solve_lp(q)
    assert inf.status is Status.INFEASIBLE and check_certificate(q, inf)
    assert not check_certificate(q, replace(inf, farkas=tuple(-x for x in inf.farkas)))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        LpProblem.build([1, 2], [[1, 2]], [1, 2])


def _random_lp(rng):
    m, n = rng.randint(1, 4), rng.randint(1, 5)
    A = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)] for _ in range(m)]
    b = [Fraction(rng.randint(-5, 5)) for _ in range(m)]
    c = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
    kinds = [(0, None), (None, None), (-2, 3), (None, 1), (1, 1)]
    bounds = [rng.choice(kinds) for _ in range(n)]
    return LpProblem.build(c, A, b, bounds=bounds, sense=rng.choice(list(Sense)))


def test_random_certificates_and_determinism():
    rng = random.Random(11)
    seen = set()
    for _ in range(300):
        p = _random_lp(rng)
        out = solve_lp(p)
        seen.add(out.status)
        assert check_certificate(p, out)
        assert solve_lp(p) == out
    assert seen == set(Status)


def test_weak_duality_from_final_basis():
    rng = random.Random(5)
    checked = 0
    for _ in range(200):
        p = _random_lp(rng)
        p = replace(p, bounds=tuple((Fraction(0), None) for _ in p.bounds), sense=Sense.MIN)
        out = solve_lp(p)
        if out.status is not Status.OPTIMAL:
            continue
        y = out.dual
        reduced = [cj - a for cj, a in zip(p.c, p.A.vecmat(y))]
        assert all(r >= 0 for r in reduced)  # dual feasible
        assert sum((yi * bi for yi, bi in zip(y, p.b)), Fraction(0)) == out.value
        checked += 1
    assert checked > 20
