"""Exact rational scalars and dense rational matrices.

Scalars are plain :class:`fractions.Fraction` values (always kept in lowest
terms with a positive denominator).  :class:`RatMatrix` is an immutable
row-major matrix of fractions with the handful of linear-algebra routines
the rest of the package needs: rank, particular solutions, null spaces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

Rational = Fraction
RatVector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class MalformedNumber(ValueError):
    pass


class ZeroDenominator(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


_FRACTION_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$")
_DECIMAL_RE = re.compile(r"^\s*([+-]?)(\d+)(?:\.(\d*))?\s*$|^\s*([+-]?)\.(\d+)\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, an integer, or a finite decimal such as ``"0.125"``."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise MalformedNumber(f"expected a string, got {type(text).__name__}")
    m = _FRACTION_RE.match(text)
    if m:
        p, q = int(m.group(1)), int(m.group(2))
        if q == 0:
            raise ZeroDenominator(f"zero denominator in {text!r}")
        return Fraction(p, q)
    m = _DECIMAL_RE.match(text)
    if m:
        if m.group(2) is not None:
            sign, whole, frac = m.group(1), m.group(2), m.group(3) or ""
        else:
            sign, whole, frac = m.group(4), "0", m.group(5)
        value = Fraction(int(whole + frac), 10 ** len(frac))
        return -value if sign == "-" else value
    raise MalformedNumber(f"not a rational number: {text!r}")


def render(x: Fraction) -> str:
    """Canonical text: ``"p/q"`` in lowest terms, or ``"p"`` for integers."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vec(values: Iterable) -> tuple:
    return tuple(parse_rational(v) if isinstance(v, str) else Fraction(v) for v in values)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise DimensionMismatch(f"dot of lengths {len(a)} and {len(b)}")
    return sum((x * y for x, y in zip(a, b) if x and y), ZERO)


@dataclass(frozen=True)
class RatMatrix:
    """Dense immutable matrix of fractions, stored row-major."""

    n_rows: int
    n_cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.n_rows * self.n_cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.n_rows}x{self.n_cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], n_cols: Optional[int] = None) -> "RatMatrix":
        rows = [vec(r) for r in rows]
        if n_cols is None:
            n_cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != n_cols:
                raise DimensionMismatch("ragged rows")
        return cls(len(rows), n_cols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], n_rows: Optional[int] = None) -> "RatMatrix":
        cols = [vec(c) for c in cols]
        if n_rows is None:
            n_rows = len(cols[0]) if cols else 0
        return cls.from_rows([[c[i] for c in cols] for i in range(n_rows)], n_cols=len(cols))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls.from_rows([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "RatMatrix":
        return cls(n_rows, n_cols, (ZERO,) * (n_rows * n_cols))

    @property
    def shape(self) -> tuple:
        return (self.n_rows, self.n_cols)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i * self.n_cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.n_cols:(i + 1) * self.n_cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.n_cols] if self.n_cols else ()

    def rows(self) -> list:
        return [self.row(i) for i in range(self.n_rows)]

    def columns(self) -> list:
        return [self.col(j) for j in range(self.n_cols)]

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix.from_rows(self.columns(), n_cols=self.n_rows)

    def matvec(self, v: Sequence[Fraction]) -> tuple:
        if len(v) != self.n_cols:
            raise DimensionMismatch(f"{self.shape} matrix times length-{len(v)} vector")
        return tuple(dot(self.row(i), v) for i in range(self.n_rows))

    def vecmat(self, y: Sequence[Fraction]) -> tuple:
        """Row vector times matrix, ``yᵀA``."""
        if len(y) != self.n_rows:
            raise DimensionMismatch(f"length-{len(y)} vector times {self.shape} matrix")
        return tuple(dot(y, self.col(j)) for j in range(self.n_cols))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.n_cols != other.n_rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        cols = other.columns()
        return RatMatrix.from_rows(
            [[dot(r, c) for c in cols] for r in self.rows()], n_cols=other.n_cols)

    def scale_rows(self, weights: Sequence[Fraction]) -> "RatMatrix":
        if len(weights) != self.n_rows:
            raise DimensionMismatch("one weight per row required")
        return RatMatrix.from_rows(
            [[w * x for x in r] for w, r in zip(weights, self.rows())], n_cols=self.n_cols)

    def to_strings(self) -> list:
        return [[render(x) for x in r] for r in self.rows()]

    def __repr__(self):
        return f"RatMatrix({self.to_strings()})"


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list:
    """Scale each row by the lcm of its denominators so all entries are integers."""
    out = []
    for r in rows:
        d = 1
        for x in r:
            d = lcm(d, Fraction(x).denominator)
        out.append([int(x * d) for x in r])
    return out


def _bareiss_echelon(rows: list) -> tuple:
    """Fraction-free forward elimination (Bareiss) on integer rows, in place.

    Returns the list of pivot columns; rows past ``len(pivots)`` are zero.
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    pivots = []
    prev = 1
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        p = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, n_rows):
            a = rows[i][c]
            ri = rows[i]
            rr = rows[r]
            for j in range(c, n_cols):
                ri[j] = (piv * ri[j] - a * rr[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def rank(A: RatMatrix) -> int:
    if A.n_rows == 0 or A.n_cols == 0:
        return 0
    return len(_bareiss_echelon(_integer_rows(A.rows())))


def rref(A: RatMatrix) -> tuple:
    """Reduced row echelon form as ``(rows, pivot_columns)``.

    Forward elimination is fraction-free; back substitution divides once per
    pivot row.
    """
    rows = _integer_rows(A.rows())
    pivots = _bareiss_echelon(rows)
    red = [[Fraction(x) for x in rows[i]] for i in range(len(pivots))]
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        piv = red[i][c]
        red[i] = [x / piv for x in red[i]]
        for k in range(i):
            f = red[k][c]
            if f:
                red[k] = [a - f * b for a, b in zip(red[k], red[i])]
    return red, pivots


def solve_exact(A: RatMatrix, b: Sequence[Fraction]) -> Optional[tuple]:
    """Some exact solution of ``A x = b``, or None when b is outside Col A."""
    if len(b) != A.n_rows:
        raise DimensionMismatch(f"{A.shape} system with length-{len(b)} right-hand side")
    n = A.n_cols
    aug = RatMatrix.from_rows([list(r) + [bi] for r, bi in zip(A.rows(), b)], n_cols=n + 1)
    red, pivots = rref(aug)
    if pivots and pivots[-1] == n:
        return None
    x = [ZERO] * n
    for r, c in zip(red, pivots):
        x[c] = r[n]
    return tuple(x)


def null_space(A: RatMatrix) -> list:
    """Basis of ``{x : A x = 0}`` (one vector per free column)."""
    n = A.n_cols
    if A.n_rows == 0:
        return [tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)]
    red, pivots = rref(A)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * n
        x[f] = ONE
        for r, c in zip(red, pivots):
            x[c] = -r[f]
        basis.append(tuple(x))
    return basis


def left_null_space(A: RatMatrix) -> list:
    """Basis of ``{y : yᵀ A = 0}``."""
    return null_space(A.T)


def primitive(v: Sequence[Fraction]) -> tuple:
    """Positive multiple of ``v`` with coprime integer entries (zero stays zero)."""
    d = 1
    for x in v:
        d = lcm(d, Fraction(x).denominator)
    ints = [int(Fraction(x) * d) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ZERO for _ in v)
    return tuple(Fraction(x // g) for x in ints)
