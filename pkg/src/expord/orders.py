"""Column-space, conic-span, zonotope and Blackwell orders with certificates.

Each ``*_dominates(e, e2)`` answers whether ``e`` dominates ``e2`` and returns
an :class:`OrderVerdict` whose certificate can be re-checked exactly with
:func:`verify_verdict`:

* dominance is certified by a factorization (``E' = E G`` with the order's
  sign constraints, or ``h_S`` columns reproducing every subset sum of E');
* non-dominance by a point of the smaller set of ``e2`` together with a
  hyperplane ``β`` separating it from the corresponding set of ``e``.

The zonotope routines work on plain matrices too, so prior-weighted
matrices (which are not row stochastic) can be compared directly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence, Union

from .exactnum import ZERO, ONE, RatMatrix, dot, left_null_space, primitive, render, solve_exact
from .experiments import (DEFAULT_REALIZATION_CAP, Experiment, Prior, subset_sums,
                          support_function, weighted_experiment)
from .lp import LpProblem, farkas_holds, feasibility, solve_lp


class Order(enum.Enum):
    COL = "col"
    CONE = "cone"
    ZON = "zon"
    BLACKWELL = "blackwell"


class StateCountMismatch(ValueError):
    pass


class NonInteriorPrior(ValueError):
    pass


@dataclass(frozen=True)
class FactorG:
    G: RatMatrix


@dataclass(frozen=True)
class Garbling:
    G: RatMatrix


@dataclass(frozen=True)
class FactorH:
    """Column ``k`` of ``H`` maps to ``points[k]``, the subset sum of ``masks[k]``.

    Subsets giving the same sum share a column; ``subset_index_map`` expands
    this to every bitmask on demand.
    """

    H: RatMatrix
    points: tuple
    masks: tuple
    generators: tuple  # columns of the dominated matrix

    @cached_property
    def subset_index_map(self) -> list:
        index = {p: k for k, p in enumerate(self.points)}
        dim = len(self.points[0])
        out = []
        for mask in range(1 << len(self.generators)):
            s = [ZERO] * dim
            for m, g in enumerate(self.generators):
                if mask >> m & 1:
                    s = [a + b for a, b in zip(s, g)]
            out.append(index[tuple(s)])
        return out


@dataclass(frozen=True)
class Witness:
    """``point`` lies in the set of ``e2`` but ``β`` separates it from the set of ``e``.

    For the Blackwell order ``beta`` is the Farkas vector of the garbling LP
    (one entry per equation of ``E G = E'`` in row-major order, then one per
    row-sum equation) and ``point`` is that LP's right-hand side.
    """

    point: tuple
    beta: tuple
    column: Optional[int] = None
    mask: Optional[int] = None


Certificate = Union[FactorG, FactorH, Garbling, Witness]


@dataclass(frozen=True)
class OrderVerdict:
    order: Order
    dominates: bool
    certificate: Certificate

    def to_json(self) -> dict:
        out = {"order": self.order.value, "dominates": self.dominates}
        cert = self.certificate
        if isinstance(cert, Witness):
            w = {"point": [render(x) for x in cert.point], "beta": [render(x) for x in cert.beta]}
            if cert.column is not None:
                w["column"] = cert.column
            if cert.mask is not None:
                w["mask"] = cert.mask
            out["witness"] = w
        elif isinstance(cert, FactorH):
            out["certificate"] = {
                "kind": "factor_h",
                "H": cert.H.to_strings(),
                "points": [[render(x) for x in p] for p in cert.points],
                "masks": list(cert.masks),
            }
        else:
            kind = "garbling" if isinstance(cert, Garbling) else "factor_g"
            out["certificate"] = {"kind": kind, "G": cert.G.to_strings()}
        return out


def _mat(e) -> RatMatrix:
    return e.matrix if isinstance(e, Experiment) else e


def _same_states(A: RatMatrix, A2: RatMatrix):
    if A.n_rows != A2.n_rows:
        raise StateCountMismatch(f"{A.n_rows} states versus {A2.n_rows}")


# -- column space -------------------------------------------------------------

def col_dominates(e, e2) -> OrderVerdict:
    A, A2 = _mat(e), _mat(e2)
    _same_states(A, A2)
    cols = []
    for j, c in enumerate(A2.columns()):
        x = solve_exact(A, c)
        if x is None:
            beta = next(y for y in left_null_space(A) if dot(y, c) != 0)
            beta = primitive(beta)
            if dot(beta, c) < 0:
                beta = tuple(-b for b in beta)
            return OrderVerdict(Order.COL, False, Witness(c, beta, column=j))
        cols.append(x)
    return OrderVerdict(Order.COL, True, FactorG(RatMatrix.from_columns(cols, n_rows=A.n_cols)))


# -- conic span ---------------------------------------------------------------

def _nonneg_bounds(n):
    return tuple((ZERO, None) for _ in range(n))


def _unit_bounds(n):
    return tuple((ZERO, ONE) for _ in range(n))


def cone_dominates(e, e2) -> OrderVerdict:
    A, A2 = _mat(e), _mat(e2)
    _same_states(A, A2)
    cols = []
    for j, c in enumerate(A2.columns()):
        out = feasibility(A, c, _nonneg_bounds(A.n_cols))
        if not out.feasible:
            return OrderVerdict(Order.CONE, False, Witness(c, primitive(out.farkas), column=j))
        cols.append(out.x)
    return OrderVerdict(Order.CONE, True, FactorG(RatMatrix.from_columns(cols, n_rows=A.n_cols)))


# -- zonotope -----------------------------------------------------------------

def zon_contains(e, p: Sequence[Fraction]):
    """LP membership of ``p`` in Zon E.

    Returns ``(True, v)`` with ``E v = p, 0 ≤ v ≤ 1`` or ``(False, β)`` with
    ``β·p > support_function(E, β)``.
    """
    A = _mat(e)
    out = feasibility(A, p, _unit_bounds(A.n_cols))
    if out.feasible:
        return True, out.x
    return False, primitive(out.farkas)


def zon_dominates(e, e2, cap: int = DEFAULT_REALIZATION_CAP) -> OrderVerdict:
    A, A2 = _mat(e), _mat(e2)
    _same_states(A, A2)
    own = subset_sums(A, cap) if A.n_cols <= cap else {}
    points, masks, hcols = [], [], []
    for p, mask in subset_sums(A2, cap).items():
        if p in own:
            m = own[p]
            h = tuple(ONE if m >> k & 1 else ZERO for k in range(A.n_cols))
        else:
            ok, h = zon_contains(A, p)
            if not ok:
                return OrderVerdict(Order.ZON, False, Witness(p, h, mask=mask))
        points.append(p)
        masks.append(mask)
        hcols.append(h)
    H = RatMatrix.from_columns(hcols, n_rows=A.n_cols)
    return OrderVerdict(Order.ZON, True, FactorH(H, tuple(points), tuple(masks), tuple(A2.columns())))


# -- Blackwell ----------------------------------------------------------------

def _garbling_lp(A: RatMatrix, A2: RatMatrix) -> LpProblem:
    """Variables ``G[m, m']`` (row-major); rows ``(E G)[n, m'] = E'[n, m']`` then ``G 1 = 1``."""
    N, M, M2 = A.n_rows, A.n_cols, A2.n_cols
    nv = M * M2
    rows, rhs = [], []
    for n in range(N):
        for j in range(M2):
            r = [ZERO] * nv
            for m in range(M):
                r[m * M2 + j] = A[n, m]
            rows.append(r)
            rhs.append(A2[n, j])
    for m in range(M):
        r = [ZERO] * nv
        for j in range(M2):
            r[m * M2 + j] = ONE
        rows.append(r)
        rhs.append(ONE)
    return LpProblem(tuple(ZERO for _ in range(nv)), RatMatrix.from_rows(rows, n_cols=nv),
                     tuple(rhs), _nonneg_bounds(nv))


def blackwell_dominates(e, e2) -> OrderVerdict:
    A, A2 = _mat(e), _mat(e2)
    _same_states(A, A2)
    p = _garbling_lp(A, A2)
    out = solve_lp(p)
    if not out.feasible:
        return OrderVerdict(Order.BLACKWELL, False, Witness(p.b, primitive(out.farkas)))
    M2 = A2.n_cols
    G = RatMatrix.from_rows([out.x[m * M2:(m + 1) * M2] for m in range(A.n_cols)], n_cols=M2)
    return OrderVerdict(Order.BLACKWELL, True, Garbling(G))


DECIDERS = {
    Order.COL: col_dominates,
    Order.CONE: cone_dominates,
    Order.ZON: zon_dominates,
    Order.BLACKWELL: blackwell_dominates,
}


def dominates(order: Order, e, e2) -> OrderVerdict:
    return DECIDERS[Order(order)](e, e2)


# -- certificate checking -----------------------------------------------------

def verify_verdict(v: OrderVerdict, e, e2) -> bool:
    """Exact re-verification of a verdict's certificate against ``(e, e2)``."""
    A, A2 = _mat(e), _mat(e2)
    cert = v.certificate
    if v.dominates:
        if v.order is Order.ZON:
            if not isinstance(cert, FactorH):
                return False
            if any(x < 0 or x > 1 for x in cert.H.entries):
                return False
            if A @ cert.H != RatMatrix.from_columns(cert.points, n_rows=A.n_rows):
                return False
            expected = subset_sums(A2)
            return set(expected) == set(cert.points)
        G = cert.G
        if A @ G != A2:
            return False
        if v.order is Order.COL:
            return isinstance(cert, FactorG)
        if any(x < 0 for x in G.entries):
            return False
        if v.order is Order.CONE:
            return isinstance(cert, FactorG)
        return isinstance(cert, Garbling) and all(sum(r, ZERO) == 1 for r in G.rows())

    if not isinstance(cert, Witness):
        return False
    beta, point = cert.beta, cert.point
    if v.order is Order.BLACKWELL:
        p = _garbling_lp(A, A2)
        return tuple(point) == p.b and farkas_holds(p, beta)
    bA = A.vecmat(beta)
    if v.order is Order.COL:
        in_set = cert.column is not None and A2.col(cert.column) == tuple(point)
        return in_set and not any(bA) and dot(beta, point) != 0
    if v.order is Order.CONE:
        in_set = cert.column is not None and A2.col(cert.column) == tuple(point)
        return in_set and all(x <= 0 for x in bA) and dot(beta, point) > 0
    if cert.mask is None:
        return False
    s = [ZERO] * A2.n_rows
    for m in range(A2.n_cols):
        if cert.mask >> m & 1:
            s = [a + b for a, b in zip(s, A2.col(m))]
    return tuple(s) == tuple(point) and dot(beta, point) > support_function(A, beta)


# -- majorization and lcx -----------------------------------------------------

def classical_majorizes(x: Sequence[Fraction], z: Sequence[Fraction]) -> bool:
    """Partial sums of the descending sort of ``x`` dominate those of ``z``.

    The shorter vector is padded with zeros; totals must agree.
    """
    L = max(len(x), len(z))
    xs = sorted(list(x) + [ZERO] * (L - len(x)), reverse=True)
    zs = sorted(list(z) + [ZERO] * (L - len(z)), reverse=True)
    sx = sz = ZERO
    for a, b in zip(xs, zs):
        sx += a
        sz += b
        if sx < sz:
            return False
    return sx == sz


def lcx_dominates_at_prior(e, e2, mu0) -> bool:
    """Linear convex order of the posterior distributions under an interior prior.

    Decided as zonotope inclusion of the prior-weighted matrices.
    """
    mu0 = mu0 if isinstance(mu0, Prior) else Prior(tuple(mu0))
    if not mu0.interior:
        raise NonInteriorPrior("the prior must give every state positive probability")
    return zon_dominates(weighted_experiment(e, mu0), weighted_experiment(e2, mu0)).dominates


def posterior_direction(beta: Sequence[Fraction], mu0) -> tuple:
    """Map a separating direction for Zon E to one in posterior space (divide by μ0)."""
    return tuple(Fraction(b) / m for b, m in zip(beta, mu0))


# -- summary ------------------------------------------------------------------

def relations_summary(e, e2) -> dict:
    """4 orders × 2 directions, plus strict-dominance flags."""
    A, A2 = _mat(e), _mat(e2)
    _same_states(A, A2)
    out = {}
    for order in Order:
        fwd = DECIDERS[order](A, A2).dominates
        bwd = DECIDERS[order](A2, A).dominates
        out[order.value] = {
            "forward": fwd,
            "backward": bwd,
            "strict_forward": fwd and not bwd,
            "strict_backward": bwd and not fwd,
        }
    return out
