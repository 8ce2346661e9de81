"""Exact two-phase simplex over the rationals.

Problems are stated as::

    min (or max)  c·x   s.t.  A x = b,  lower ≤ x ≤ upper

with per-variable bounds that may be infinite (``None``).  Every outcome
carries a certificate that :func:`check_certificate` re-verifies by exact
substitution:

* Optimal: the point ``x`` and row duals ``y``.  The Lagrangian bound
  ``yᵀb + Σ_j min_{x_j ∈ [l_j, u_j]} (c_j − (yᵀA)_j) x_j`` equals the value.
* Infeasible: a Farkas vector ``y`` with
  ``yᵀb > max_{l ≤ x ≤ u} (yᵀA)·x`` (the right side must be finite).
* Unbounded: a feasible ``x`` and a recession direction ``ray`` with
  ``A·ray = 0`` and strictly improving objective.

Pivoting uses Bland's smallest-index rule, so the solver terminates and is
deterministic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactnum import ONE, ZERO, DimensionMismatch, RatMatrix, dot


class Sense(enum.Enum):
    MIN = "min"
    MAX = "max"


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpProblem:
    c: tuple
    A: RatMatrix
    b: tuple
    bounds: tuple  # one (lower, upper) per variable; None means infinite
    sense: Sense = Sense.MIN

    def __post_init__(self):
        n = len(self.c)
        if self.A.n_cols != n and not (self.A.n_rows == 0):
            raise DimensionMismatch(f"A has {self.A.n_cols} columns for {n} variables")
        if self.A.n_rows != len(self.b):
            raise DimensionMismatch(f"A has {self.A.n_rows} rows, b has {len(self.b)}")
        if len(self.bounds) != n:
            raise DimensionMismatch(f"{len(self.bounds)} bounds for {n} variables")
        for j, (lo, hi) in enumerate(self.bounds):
            if lo is not None and hi is not None and lo > hi:
                raise ValueError(f"variable {j}: lower bound {lo} exceeds upper bound {hi}")

    @property
    def n_vars(self) -> int:
        return len(self.c)

    @classmethod
    def build(cls, c, A_rows, b, bounds=None, sense=Sense.MIN) -> "LpProblem":
        """Convenience constructor from plain nested sequences."""
        n = len(c)
        A = RatMatrix.from_rows(A_rows, n_cols=n) if A_rows else RatMatrix(0, n, ())
        if bounds is None:
            bounds = [(ZERO, None)] * n
        bounds = tuple((None if lo is None else Fraction(lo), None if hi is None else Fraction(hi))
                       for lo, hi in bounds)
        return cls(tuple(Fraction(x) for x in c), A, tuple(Fraction(x) for x in b), bounds, sense)


@dataclass(frozen=True)
class LpOutcome:
    status: Status
    x: Optional[tuple] = None
    value: Optional[Fraction] = None
    dual: Optional[tuple] = None
    farkas: Optional[tuple] = None
    ray: Optional[tuple] = None
    pivots: int = field(default=0, compare=False)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    @property
    def feasible(self) -> bool:
        return self.status is not Status.INFEASIBLE


# -- standard-form conversion -------------------------------------------------

@dataclass
class _Column:
    var: int  # original variable index, or -1 for a bound slack
    sign: int  # x_var = offset + sign * z


def _to_standard(p: LpProblem):
    """Rewrite ``p`` as ``min c'z, A'z = b', z ≥ 0``.

    Returns the standard data plus the maps needed to translate back.
    """
    m, n = p.A.n_rows, p.n_vars
    cost = list(p.c) if p.sense is Sense.MIN else [-x for x in p.c]
    offset = [ZERO] * n
    cols: list = []
    upper_rows = []  # (column index of shifted var, width)
    for j, (lo, hi) in enumerate(p.bounds):
        if lo is not None:
            offset[j] = lo
            cols.append(_Column(j, 1))
            if hi is not None:
                upper_rows.append((len(cols) - 1, hi - lo))
        elif hi is not None:
            offset[j] = hi
            cols.append(_Column(j, -1))
        else:
            cols.append(_Column(j, 1))
            cols.append(_Column(j, -1))
    n_struct = len(cols)
    for _ in upper_rows:
        cols.append(_Column(-1, 1))

    rows = []
    rhs = []
    A_rows = p.A.rows() if p.A.n_rows else []
    for i in range(m):
        r = A_rows[i]
        rows.append([col.sign * r[col.var] if col.var >= 0 else ZERO for col in cols])
        rhs.append(p.b[i] - dot(r, offset))
    for k, (ci, width) in enumerate(upper_rows):
        r = [ZERO] * len(cols)
        r[ci] = ONE
        r[n_struct + k] = ONE
        rows.append(r)
        rhs.append(width)
    c_std = [col.sign * cost[col.var] if col.var >= 0 else ZERO for col in cols]
    return rows, rhs, c_std, cols, offset


def _to_original(z: Sequence[Fraction], cols, offset, with_offset=True) -> tuple:
    x = list(offset) if with_offset else [ZERO] * len(offset)
    for zi, col in zip(z, cols):
        if col.var >= 0 and zi:
            x[col.var] += col.sign * zi
    return tuple(x)


# -- tableau simplex ----------------------------------------------------------

class _Tableau:
    """Dense tableau ``[B⁻¹A | B⁻¹ | B⁻¹b]`` with artificial identity columns kept."""

    def __init__(self, rows, rhs):
        self.m = len(rows)
        self.n = len(rows[0]) if rows else 0
        self.sign = []
        self.T = []
        for i, (r, bi) in enumerate(zip(rows, rhs)):
            s = -1 if bi < 0 else 1
            self.sign.append(s)
            art = [ZERO] * self.m
            art[i] = ONE
            self.T.append([s * x for x in r] + art + [s * bi])
        self.basis = [self.n + i for i in range(self.m)]
        self.pivots = 0

    def pivot(self, r: int, c: int):
        T = self.T
        row = T[r]
        piv = row[c]
        if piv != 1:
            row = [x / piv for x in row]
            T[r] = row
        nz = [j for j, x in enumerate(row) if x]
        for i in range(self.m):
            if i == r:
                continue
            f = T[i][c]
            if f:
                Ti = T[i]
                for j in nz:
                    Ti[j] -= f * row[j]
        self.basis[r] = c
        self.pivots += 1

    def duals(self, cost):
        """``c_Bᵀ B⁻¹`` read from the artificial columns (sign-adjusted rows)."""
        n = self.n
        return [sum((cost[self.basis[i]] * self.T[i][n + k]
                     for i in range(self.m) if self.T[i][n + k]), ZERO)
                for k in range(self.m)]

    def run(self, cost, allowed):
        """Bland's rule on columns ``allowed``; returns None or an unbounded column."""
        while True:
            basic = set(self.basis)
            cb = [cost[j] for j in self.basis]
            entering = None
            for j in allowed:
                if j in basic:
                    continue
                d = cost[j] - sum((cb[i] * self.T[i][j] for i in range(self.m) if self.T[i][j]), ZERO)
                if d < 0:
                    entering = j
                    break
            if entering is None:
                return None
            best = None
            for i in range(self.m):
                a = self.T[i][entering]
                if a > 0:
                    ratio = self.T[i][-1] / a
                    if (best is None or ratio < best[0]
                            or (ratio == best[0] and self.basis[i] < self.basis[best[1]])):
                        best = (ratio, i)
            if best is None:
                return entering
            self.pivot(best[1], entering)

    def solution(self) -> list:
        z = [ZERO] * (self.n + self.m)
        for i, j in enumerate(self.basis):
            z[j] = self.T[i][-1]
        return z


def solve_lp(p: LpProblem) -> LpOutcome:
    rows, rhs, c_std, cols, offset = _to_standard(p)
    m = len(rows)
    n = len(c_std)
    tab = _Tableau(rows, rhs) if m else None

    if m == 0:
        # No rows: each standard variable sits at zero unless it improves the objective.
        for j, cj in enumerate(c_std):
            if cj < 0:
                ray_z = [ZERO] * n
                ray_z[j] = ONE
                x = _to_original([ZERO] * n, cols, offset)
                ray = _to_original(ray_z, cols, offset, with_offset=False)
                return LpOutcome(Status.UNBOUNDED, x=x, ray=ray)
        x = _to_original([ZERO] * n, cols, offset)
        return LpOutcome(Status.OPTIMAL, x=x, value=dot(p.c, x), dual=())

    # Phase 1: minimize the sum of artificials.
    phase1 = [ZERO] * n + [ONE] * m
    tab.run(phase1, range(n + m))
    z = tab.solution()
    if sum(z[n:], ZERO) > 0:
        y_std = tab.duals(phase1)
        # phase-1 duals give πᵀA' ≤ 0 < πᵀb' for the sign-adjusted rows;
        # undo the sign flip and keep only the rows of the original A.
        y = tuple(s * v for s, v in zip(tab.sign, y_std))[:p.A.n_rows]
        return LpOutcome(Status.INFEASIBLE, farkas=y, pivots=tab.pivots)

    # Drive zero-level artificials out of the basis where possible.
    for i in range(m):
        if tab.basis[i] >= n:
            j = next((j for j in range(n) if tab.T[i][j]), None)
            if j is not None:
                tab.pivot(i, j)

    cost = list(c_std) + [ZERO] * m
    unbounded = tab.run(cost, range(n))
    z = tab.solution()
    x = _to_original(z[:n], cols, offset)
    if unbounded is not None:
        ray_z = [ZERO] * n
        ray_z[unbounded] = ONE
        for i, j in enumerate(tab.basis):
            if j < n:
                ray_z[j] = -tab.T[i][unbounded]
        ray = _to_original(ray_z, cols, offset, with_offset=False)
        return LpOutcome(Status.UNBOUNDED, x=x, ray=ray, pivots=tab.pivots)

    y_std = tab.duals(cost)
    y = tuple(s * v for s, v in zip(tab.sign, y_std))[:p.A.n_rows]
    if p.sense is Sense.MAX:
        y = tuple(-v for v in y)
    return LpOutcome(Status.OPTIMAL, x=x, value=dot(p.c, x), dual=y, pivots=tab.pivots)


# -- certificate verification -------------------------------------------------

def _box_max(d: Sequence[Fraction], bounds) -> Optional[Fraction]:
    """``max Σ d_j x_j`` over the box, or None when unbounded above."""
    total = ZERO
    for dj, (lo, hi) in zip(d, bounds):
        if dj > 0:
            if hi is None:
                return None
            total += dj * hi
        elif dj < 0:
            if lo is None:
                return None
            total += dj * lo
    return total


def _box_min(d, bounds) -> Optional[Fraction]:
    m = _box_max([-x for x in d], bounds)
    return None if m is None else -m


def is_feasible_point(p: LpProblem, x: Sequence[Fraction]) -> bool:
    if x is None or len(x) != p.n_vars:
        return False
    for xj, (lo, hi) in zip(x, p.bounds):
        if (lo is not None and xj < lo) or (hi is not None and xj > hi):
            return False
    return p.A.n_rows == 0 or p.A.matvec(x) == tuple(p.b)


def farkas_holds(p: LpProblem, y: Sequence[Fraction]) -> bool:
    """True iff ``y`` proves ``A x = b, l ≤ x ≤ u`` has no solution."""
    if y is None or len(y) != p.A.n_rows:
        return False
    d = p.A.vecmat(y) if p.A.n_rows else tuple(ZERO for _ in p.c)
    bound = _box_max(d, p.bounds)
    return bound is not None and dot(y, p.b) > bound


def check_certificate(p: LpProblem, o: LpOutcome) -> bool:
    """Re-verify every claim of ``o`` about ``p`` by exact substitution."""
    if o.status is Status.INFEASIBLE:
        return farkas_holds(p, o.farkas)
    if not is_feasible_point(p, o.x):
        return False
    if o.status is Status.UNBOUNDED:
        r = o.ray
        if r is None or len(r) != p.n_vars or not any(r):
            return False
        if p.A.n_rows and any(p.A.matvec(r)):
            return False
        for rj, (lo, hi) in zip(r, p.bounds):
            if (rj > 0 and hi is not None) or (rj < 0 and lo is not None):
                return False
        gain = dot(p.c, r)
        return gain < 0 if p.sense is Sense.MIN else gain > 0
    # optimal
    if o.value != dot(p.c, o.x) or o.dual is None or len(o.dual) != p.A.n_rows:
        return False
    sign = 1 if p.sense is Sense.MIN else -1
    c = [sign * cj for cj in p.c]
    y = [sign * yi for yi in o.dual]
    yA = p.A.vecmat(y) if p.A.n_rows else tuple(ZERO for _ in c)
    reduced = [cj - aj for cj, aj in zip(c, yA)]
    bound = _box_min(reduced, p.bounds)
    if bound is None:
        return False
    return dot(y, p.b) + bound == sign * o.value


def feasibility(A: RatMatrix, b: Sequence[Fraction], bounds) -> LpOutcome:
    """Feasibility LP (zero objective) for ``A x = b`` within ``bounds``."""
    c = tuple(ZERO for _ in range(A.n_cols))
    return solve_lp(LpProblem(c, A, tuple(b), tuple(bounds)))
