import random
from fractions import Fraction as F

import pytest

from expord.exactnum import RatMatrix, dot
from expord.experiments import Prior, experiment, permute_columns, split_column, support_function, uninformative
from expord.orders import (DECIDERS, FactorG, FactorH, Garbling, NonInteriorPrior, Order, StateCountMismatch,
                           Witness, blackwell_dominates, classical_majorizes, col_dominates, cone_dominates,
                           lcx_dominates_at_prior, relations_summary, verify_verdict, zon_dominates)
from expord.sweeps import garble, random_experiment, random_garbling


def test_col_examples(E1, E2, flat2):
    v = col_dominates(E1, E2)
    assert v.dominates and E1.matrix @ v.certificate.G == E2.matrix
    v = col_dominates(E1, E1)
    assert v.dominates and E1.matrix @ v.certificate.G == E1.matrix
    v = col_dominates(flat2, E1)
    assert not v.dominates
    w = v.certificate
    assert w.beta == (1, -1)
    assert all(x == 0 for x in flat2.matrix.vecmat(w.beta)) and dot(w.beta, w.point) == F(1, 5)


def test_cone_examples(E1, E2, E3):
    v = cone_dominates(E1, E2)
    assert not v.dominates
    w = v.certificate
    assert w.point == (F(1, 2), F(1, 10))
    assert all(x <= 0 for x in E1.matrix.vecmat(w.beta)) and dot(w.beta, w.point) > 0
    assert cone_dominates(E2, E3).dominates and cone_dominates(E3, E2).dominates
    v = cone_dominates(E2, E1)
    assert v.dominates
    assert v.certificate.G.col(0) == (F(13, 12), 0, F(7, 12)) or E2.matrix @ v.certificate.G == E1.matrix
    assert all(x >= 0 for x in v.certificate.G.entries)


def test_zon_examples(E2, E3):
    v = zon_dominates(E2, E3)
    assert not v.dominates
    w = v.certificate
    assert dot(w.beta, w.point) > support_function(E2, w.beta)
    assert v.to_json()["witness"]["point"] == ["4/5", "1/5"]
    assert v.to_json()["witness"]["beta"] == ["1", "-1"]
    v = zon_dominates(E3, E2)
    assert v.dominates
    k = v.certificate.points.index((F(9, 10), F(1, 2)))
    assert E3.matrix.matvec(v.certificate.H.col(k)) == (F(9, 10), F(1, 2))
    assert zon_dominates(E2, E2).dominates


def test_factor_h_covers_all_subsets(E3, E2):
    cert = zon_dominates(E3, E2).certificate
    idx = cert.subset_index_map
    assert len(idx) == 8
    for mask, k in enumerate(idx):
        s = tuple(sum(E2.column(m)[i] for m in range(3) if mask >> m & 1) for i in range(2))
        assert E3.matrix.matvec(cert.H.col(k)) == s


def test_factor_h_with_duplicate_columns(E1):
    dup = experiment([["3/10", "3/10", "2/5"], ["1/5", "1/5", "3/5"]])
    v = zon_dominates(E1, dup)
    assert len(v.certificate.subset_index_map) == 8
    assert verify_verdict(v, E1, dup)


def test_blackwell_examples(E1, E2):
    assert blackwell_dominates(E1, split_column(E1, 0)).dominates
    v = blackwell_dominates(E2, E1)
    assert v.dominates
    G = v.certificate.G
    assert E2.matrix @ G == E1.matrix and all(sum(r) == 1 for r in G.rows())
    assert not blackwell_dominates(E1, E2).dominates


def test_state_count_mismatch(E1):
    with pytest.raises(StateCountMismatch):
        col_dominates(E1, experiment([[1], [1], [1]]))


def test_majorization():
    assert classical_majorizes((F(2, 5), 0, F(-2, 5)), (F(1, 5), F(-1, 5)))
    assert classical_majorizes((1, 2, 3), (3, 2, 1))
    assert not classical_majorizes((F(1, 5), F(-1, 5)), (F(2, 5), 0, F(-2, 5)))
    assert not classical_majorizes((1, 1), (1, 2))


def test_lcx_at_prior(E2, E3):
    u = Prior.uniform(2)
    assert lcx_dominates_at_prior(E3, E2, u)
    assert not lcx_dominates_at_prior(E2, E3, u)
    assert lcx_dominates_at_prior(E2, E2, Prior((F(1, 3), F(2, 3))))
    with pytest.raises(NonInteriorPrior):
        lcx_dominates_at_prior(E2, E3, Prior((1, 0)))


def test_relations_summary(E1, E2, E3):
    s = relations_summary(E1, E2)
    assert s["col"]["forward"] and s["col"]["backward"]
    for o in ("cone", "zon", "blackwell"):
        assert not s[o]["forward"] and s[o]["backward"] and s[o]["strict_backward"]
    s = relations_summary(E2, E3)
    assert s["cone"]["forward"] and s["cone"]["backward"]
    assert not s["zon"]["forward"] and s["zon"]["backward"]
    assert not s["blackwell"]["forward"] and s["blackwell"]["backward"]
    s = relations_summary(E2, E2)
    assert all(v["forward"] and v["backward"] and not v["strict_forward"] for v in s.values())


def _pairs(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(2, 4)
        e = random_experiment(rng, n, rng.randint(1, 5))
        if rng.random() < 0.4:
            e2 = garble(e, random_garbling(rng, e.n_realizations, rng.randint(1, 5)))
        else:
            e2 = random_experiment(rng, n, rng.randint(1, 5))
        yield rng, e, e2


def test_certificates_verify_and_support_inequality():
    for rng, e, e2 in _pairs(21, 80):
        for order in Order:
            v = DECIDERS[order](e, e2)
            assert verify_verdict(v, e, e2)
            if order is Order.ZON and not v.dominates:
                b = v.certificate.beta
                assert support_function(e, b) < support_function(e2, b)
        if zon_dominates(e, e2).dominates:
            for _ in range(200):
                beta = tuple(F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(e.n_states))
                assert support_function(e, beta) >= support_function(e2, beta)


def test_partial_sum_majorization_does_not_follow_from_zon(E1):
    # Merging both columns into one (plus a zero column) is a garbling, yet for
    # β = (−1, −1) the merged vector (−2, 0) has the larger top entry.
    merged = experiment([[1, 0], [1, 0]])
    assert zon_dominates(E1, merged).dominates
    beta = (-1, -1)
    x, z = E1.matrix.vecmat(beta), merged.matrix.vecmat(beta)
    assert not classical_majorizes(x, z)
    # the positive-part (support function) form still holds
    assert support_function(E1, beta) >= support_function(merged, beta)


def test_tampered_certificates_fail(E1, E2, E3):
    v = col_dominates(E1, E2)
    G = v.certificate.G
    bad = RatMatrix(G.n_rows, G.n_cols, (G.entries[0] + 1,) + G.entries[1:])
    assert not verify_verdict(type(v)(v.order, True, FactorG(bad)), E1, E2)
    w = zon_dominates(E2, E3)
    assert not verify_verdict(type(w)(w.order, False, Witness(w.certificate.point, (-1, 1))), E2, E3)
    b = blackwell_dominates(E2, E1)
    assert not verify_verdict(type(b)(b.order, True, Garbling(RatMatrix.zeros(3, 2))), E2, E1)


def test_invariance_under_permutation_and_splitting():
    rng = random.Random(4)
    for _, e, e2 in _pairs(33, 25):
        base = {o: DECIDERS[o](e, e2).dominates for o in Order}
        pe = permute_columns(e, list(reversed(range(e.n_realizations))))
        se2 = split_column(e2, rng.randrange(e2.n_realizations))
        for o in Order:
            assert DECIDERS[o](pe, e2).dominates == base[o]
            assert DECIDERS[o](e, se2).dominates == base[o]


def test_reflexive_and_transitive():
    rng = random.Random(9)
    for _ in range(25):
        n = rng.randint(2, 3)
        a = random_experiment(rng, n, rng.randint(2, 4))
        b = garble(a, random_garbling(rng, a.n_realizations, rng.randint(2, 4))) if rng.random() < .5 \
            else random_experiment(rng, n, rng.randint(2, 4))
        c = garble(b, random_garbling(rng, b.n_realizations, rng.randint(2, 4))) if rng.random() < .5 \
            else random_experiment(rng, n, rng.randint(2, 4))
        for o in Order:
            d = DECIDERS[o]
            assert d(a, a).dominates
            if d(a, b).dominates and d(b, c).dominates:
                assert d(a, c).dominates


def test_uninformative_is_dominated():
    rng = random.Random(2)
    for _ in range(20):
        e = random_experiment(rng, 3, 3)
        for o in Order:
            assert DECIDERS[o](e, uninformative(3, 2)).dominates


def test_verdict_json_shapes(E2, E3):
    assert zon_dominates(E3, E2).to_json()["certificate"]["kind"] == "factor_h"
    assert isinstance(zon_dominates(E3, E2).certificate, FactorH)
    assert blackwell_dominates(E3, E2).to_json()["certificate"]["kind"] == "garbling"
