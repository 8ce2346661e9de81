import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from expord.exactnum import DimensionMismatch, RatMatrix
from expord.experiments import (NegativeEntry, Prior, RowSumNotOne, TooManyRealizations, experiment,
                                experiment_from_json, posteriors, subset_sums, support_function,
                                validate_experiment, weighted_experiment, zonotope_vertices)
from expord.lp import LpProblem, Sense, solve_lp
from expord.sweeps import random_experiment, random_prior

from conftest import E1_ROWS


def test_validate_examples():
    assert validate_experiment(RatMatrix.from_rows(E1_ROWS)).n_realizations == 2
    with pytest.raises(RowSumNotOne) as exc:
        experiment([[1, 0], ["1/2", "1/3"]])
    assert (exc.value.row, exc.value.actual) == (2, F(5, 6))
    with pytest.raises(NegativeEntry) as exc:
        experiment([["3/2", "-1/2"], [0, 1]])
    assert (exc.value.row, exc.value.col) == (1, 2)


def test_json_round_trip(E1):
    doc = E1.to_json()
    assert experiment_from_json(doc).matrix == E1.matrix


def test_posteriors_examples(E1, E2):
    d = posteriors(E1, Prior.uniform(2))
    assert d.atoms == (((F(3, 5), F(2, 5)), F(1, 2)), ((F(2, 5), F(3, 5)), F(1, 2)))
    d = posteriors(E2, Prior.uniform(2))
    assert d.atoms == (((F(5, 6), F(1, 6)), F(3, 10)), ((F(1, 2), F(1, 2)), F(2, 5)),
                       ((F(1, 6), F(5, 6)), F(3, 10)))
    d = posteriors(E2, Prior((1, 0)))
    assert all(p == (1, 0) for p, _ in d.atoms)


def test_zero_marginal_dropped():
    e = experiment([[1, 0], ["1/2", "1/2"]])
    d = posteriors(e, Prior((1, 0)))
    assert d.realizations == (0,) and d.dropped_realizations == (1,)
    assert d.to_json()["merged"] is False


def test_bayes_plausibility_random():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(2, 4)
        e = random_experiment(rng, n, rng.randint(1, 6))
        mu = random_prior(rng, n, interior=rng.random() < 0.5)
        d = posteriors(e, mu)
        assert d.mean() == mu.mu
        assert sum(w for _, w in d.atoms) == 1
        assert all(sum(p) == 1 for p, _ in d.atoms)


def test_support_function_examples(E1, E2):
    assert support_function(E1, (1, -1)) == F(1, 5)
    assert support_function(E2, (1, -1)) == F(2, 5)
    assert support_function(E2, (0, 0)) == 0
    with pytest.raises(DimensionMismatch):
        support_function(E2, (1, 2, 3))


def test_support_function_symmetry_and_lp():
    rng = random.Random(8)
    for _ in range(100):
        n = rng.randint(2, 4)
        e = random_experiment(rng, n, rng.randint(1, 5))
        beta = tuple(F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n))
        h, hm = support_function(e, beta), support_function(e, tuple(-b for b in beta))
        assert h + hm >= 0
        assert (h + hm == 0) == all(x == 0 for x in e.matrix.vecmat(beta))
        p = LpProblem(e.matrix.vecmat(beta), RatMatrix(0, e.n_realizations, ()), (),
                      tuple((F(0), F(1)) for _ in range(e.n_realizations)), Sense.MAX)
        assert solve_lp(p).value == h


def test_zonotope_vertices_examples(E1, E2):
    assert set(zonotope_vertices(E1)) == {(0, 0), (F(3, 5), F(2, 5)), (F(2, 5), F(3, 5)), (1, 1)}
    assert set(zonotope_vertices(experiment([[1], [1]]))) == {(0, 0), (1, 1)}
    v2 = zonotope_vertices(E2)
    assert len(v2) == 8 and (F(9, 10), F(1, 2)) in v2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_zonotope_vertices_symmetry(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    e = random_experiment(rng, n, rng.randint(1, 6))
    pts = set(zonotope_vertices(e))
    assert tuple([F(0)] * n) in pts and tuple([F(1)] * n) in pts
    assert {tuple(1 - x for x in p) for p in pts} == pts


def test_subset_sum_masks(E2):
    for p, mask in subset_sums(E2).items():
        cols = [E2.column(m) for m in range(3) if mask >> m & 1]
        assert tuple(sum(c[i] for c in cols) for i in range(2)) == p


def test_realization_cap():
    e = experiment([[F(1, 21)] * 21])
    with pytest.raises(TooManyRealizations):
        subset_sums(e)


def test_weighted_experiment(E1, E2):
    assert weighted_experiment(E1, Prior.uniform(2)).to_strings() == [["3/10", "1/5"], ["1/5", "3/10"]]
    assert weighted_experiment(E1, Prior((1, 0))).to_strings() == [["3/5", "2/5"], ["0", "0"]]
    w = weighted_experiment(E2, Prior((F(1, 4), F(3, 4))))
    assert w.row(0) == tuple(x / 4 for x in E2.matrix.row(0))
    assert w.row(1) == tuple(3 * x / 4 for x in E2.matrix.row(1))
