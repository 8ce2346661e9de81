from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from expord.exactnum import (MalformedNumber, RatMatrix, ZeroDenominator, left_null_space, null_space,
                             parse_rational, primitive, rank, render, rref, solve_exact)

from conftest import E1_ROWS, E2_ROWS


@pytest.mark.parametrize("text,value", [
    ("0.4", Fraction(2, 5)),
    ("1/8", Fraction(1, 8)),
    ("0.0", Fraction(0)),
    ("-3/6", Fraction(-1, 2)),
    (".125", Fraction(1, 8)),
    ("7", Fraction(7)),
    (" 2 / -4 ", Fraction(-1, 2)),
])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1/2/3", "1e3", "0.1.2", "nan", "inf", "1/"])
def test_parse_rejects_malformed(text):
    with pytest.raises(MalformedNumber):
        parse_rational(text)


def test_zero_denominator():
    with pytest.raises(ZeroDenominator):
        parse_rational("3/0")


def test_render_canonical():
    assert render(Fraction(4, 8)) == "1/2"
    assert render(Fraction(-6, 3)) == "-2"
    assert render(Fraction(0)) == "0"


@given(st.fractions())
def test_render_round_trip(x):
    assert parse_rational(render(x)) == x


def test_rank_examples():
    assert rank(RatMatrix.from_rows(E1_ROWS)) == 2
    assert rank(RatMatrix.zeros(3, 3)) == 0
    assert rank(RatMatrix.from_rows([[1, 1], [0, 0]])) == 1


small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def matrices(draw, max_rows=6, max_cols=8):
    m = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    # bias toward dependent rows so low ranks actually occur
    base = [draw(st.lists(small, min_size=n, max_size=n)) for _ in range(draw(st.integers(1, m)))]
    rows = []
    for _ in range(m):
        coeffs = draw(st.lists(st.integers(-2, 2), min_size=len(base), max_size=len(base)))
        rows.append([sum((c * r[j] for c, r in zip(coeffs, base)), Fraction(0)) for j in range(n)])
    return RatMatrix.from_rows(rows)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_transpose(A):
    assert rank(A) == rank(A.T)


@settings(max_examples=150, deadline=None)
@given(matrices(), st.data())
def test_solve_exact_verifies(A, data):
    x0 = data.draw(st.lists(small, min_size=A.n_cols, max_size=A.n_cols))
    b = A.matvec(x0)
    x = solve_exact(A, b)
    assert x is not None
    assert A.matvec(x) == b


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_null_spaces(A):
    ns = null_space(A)
    assert len(ns) == A.n_cols - rank(A)
    for v in ns:
        assert all(x == 0 for x in A.matvec(v))
    for y in left_null_space(A):
        assert all(x == 0 for x in A.vecmat(y))


def test_solve_exact_examples():
    I = RatMatrix.identity(2)
    assert solve_exact(I, (Fraction(3, 5), Fraction(2, 5))) == (Fraction(3, 5), Fraction(2, 5))
    E1 = RatMatrix.from_rows(E1_ROWS)
    b = RatMatrix.from_rows(E2_ROWS).col(0)
    x = solve_exact(E1, b)
    assert E1.matvec(x) == b
    assert solve_exact(RatMatrix.from_rows([[1], [1]]), (Fraction(1), Fraction(0))) is None


def test_rref_is_reduced():
    red, piv = rref(RatMatrix.from_rows([[2, 4, 1], [1, 2, 0], [3, 6, 1]]))
    assert piv == [0, 2]
    assert red == [[1, 2, 0], [0, 0, 1]]


def test_primitive():
    assert primitive([Fraction(1, 2), Fraction(-3, 4)]) == (2, -3)
    assert primitive([0, 0]) == (0, 0)


def test_matrix_products():
    A = RatMatrix.from_rows([[1, 2], [3, 4]])
    assert (A @ RatMatrix.identity(2)) == A
    assert A.T.to_strings() == [["1", "3"], ["2", "4"]]
    assert A.vecmat((1, 1)) == (4, 6)
