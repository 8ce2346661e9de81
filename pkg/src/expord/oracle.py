"""Brute-force cross-checks for the LP-based deciders and the contract solver.

Nothing here shares code paths with the simplex-based membership test: the
zonotope check enumerates facet normals, best responses are found by grid
search, and the linear convex order is probed by sampling convex functions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, lcm
from typing import Iterable, Optional, Sequence

from .exactnum import ZERO, DimensionMismatch, RatMatrix, dot, null_space, primitive, rank, rref, solve_exact, vec
from .experiments import DimensionCap, Experiment, Prior, posteriors, support_function
from .moralhazard import UtilitySpec
from .orders import NonInteriorPrior

FACET_MAX_STATES = 4
FACET_MAX_REALIZATIONS = 12


class UnboundedColumn(ValueError):
    def __init__(self, column: int):
        super().__init__(f"column {column} has an unbounded maximum")
        self.column = column


def _mat(e) -> RatMatrix:
    return e.matrix if isinstance(e, Experiment) else e


# -- zonotope facets ----------------------------------------------------------

def facet_normals(e) -> list:
    """Candidate facet normals of Zon E inside Col E, both signs, plus ± axes.

    With ``r = rank E``, every facet of the zonotope (relative to Col E) is
    parallel to some ``r − 1`` independent generators, so its normal is the
    direction in Col E orthogonal to them.
    """
    A = _mat(e)
    N, M = A.shape
    if N > FACET_MAX_STATES or M > FACET_MAX_REALIZATIONS:
        raise DimensionCap(f"facet enumeration supports N ≤ {FACET_MAX_STATES}, "
                           f"M ≤ {FACET_MAX_REALIZATIONS}; got {N}×{M}")
    cols = A.columns()
    _, piv = rref(A)
    basis = [cols[j] for j in piv]  # a basis of Col E
    r = len(basis)
    seen, out = set(), []

    def add(beta):
        beta = primitive(beta)
        for b in (beta, tuple(-x for x in beta)):
            if any(b) and b not in seen:
                seen.add(b)
                out.append(b)

    for subset in combinations(range(M), r - 1):
        S = [cols[j] for j in subset]
        if S and rank(RatMatrix.from_columns(S, n_rows=N)) != r - 1:
            continue
        # β = B z with β ⟂ every column of S
        if S:
            K = RatMatrix.from_rows([[dot(s, bk) for bk in basis] for s in S], n_cols=r)
            zs = null_space(K)
        else:
            zs = [tuple(Fraction(int(i == 0)) for i in range(r))]
        for z in zs:
            add(tuple(sum((zk * bk[n] for zk, bk in zip(z, basis)), ZERO) for n in range(N)))
    for n in range(N):
        add(tuple(Fraction(int(i == n)) for i in range(N)))
    return out


def zon_membership_by_facets(e, p: Sequence[Fraction]) -> bool:
    A = _mat(e)
    p = vec(p)
    if len(p) != A.n_rows:
        raise DimensionMismatch(f"point of length {len(p)} for {A.n_rows} states")
    normals = facet_normals(A)
    if solve_exact(A, p) is None:
        return False
    return all(dot(b, p) <= support_function(A, b) for b in normals)


# -- concrete costs and grid search -------------------------------------------

@dataclass(frozen=True)
class QuadraticCost:
    """``C(μ) = (scale/2)·‖μ − center‖²``; zero exactly at the free option ``center``."""

    center: Prior
    scale: Fraction

    def __post_init__(self):
        if not isinstance(self.center, Prior):
            object.__setattr__(self, "center", Prior(tuple(self.center)))
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    def value(self, mu) -> Fraction:
        return self.scale / 2 * sum(((Fraction(a) - b) ** 2 for a, b in zip(mu, self.center)), ZERO)

    def gradient(self, mu) -> tuple:
        return tuple(self.scale * (Fraction(a) - b) for a, b in zip(mu, self.center))

    @classmethod
    def matching_gradient(cls, mu0, g: Sequence[Fraction], scale: Optional[Fraction] = None):
        """Cost whose gradient at ``mu0`` equals ``g`` up to a multiple of 1.

        The center is ``mu0 − (g − mean(g))/scale``; the default scale is the
        smallest that keeps the center inside the simplex.
        """
        mu = mu0.mu if isinstance(mu0, Prior) else vec(mu0)
        g = vec(g)
        mean = sum(g, ZERO) / len(g)
        d = [x - mean for x in g]
        if scale is None:
            need = [x / m for x, m in zip(d, mu) if x > 0]
            if any(x > 0 and m == 0 for x, m in zip(d, mu)):
                raise ValueError("no quadratic cost matches this gradient at a boundary prior")
            scale = max(need, default=Fraction(1))
            scale = max(scale, Fraction(1))
        scale = Fraction(scale)
        return cls(Prior(tuple(m - x / scale for m, x in zip(mu, d))), scale)


@dataclass(frozen=True)
class SimplexGrid:
    n_states: int
    resolution: int

    def __len__(self):
        return comb(self.resolution + self.n_states - 1, self.n_states - 1)

    def compositions(self) -> Iterable[tuple]:
        """Integer compositions of ``resolution`` into ``n_states`` parts, lexicographic."""
        def rec(left, parts):
            if parts == 1:
                yield (left,)
                return
            for a in range(left + 1):
                for rest in rec(left - a, parts - 1):
                    yield (a,) + rest
        return rec(self.resolution, self.n_states)

    def points(self) -> Iterable[Prior]:
        k = self.resolution
        for a in self.compositions():
            yield Prior(tuple(Fraction(x, k) for x in a))


def grid_best_response(e, t: Sequence[Fraction], u: UtilitySpec,
                       cost: QuadraticCost, grid: SimplexGrid) -> Prior:
    """Grid argmax of ``μ·E·u(t) − C(μ)``; the lexicographically first maximizer wins.

    Everything is scaled to a common denominator so the search runs on
    integers.
    """
    A = _mat(e)
    X = A.matvec(tuple(u.u(x) for x in t))
    m = cost.center.mu
    S = cost.scale
    if grid.n_states != len(X):
        raise DimensionMismatch(f"grid over {grid.n_states} states for {len(X)}")
    D = 1
    for x in list(X) + list(m) + [S]:
        D = lcm(D, x.denominator)
    Xi = [int(x * D) for x in X]
    mi = [int(x * D) for x in m]
    Si = int(S * D)
    k = grid.resolution
    best, arg = None, None
    for a in grid.compositions():
        lin = sum(ai * xi for ai, xi in zip(a, Xi))
        quad = sum((ai * D - k * c) ** 2 for ai, c in zip(a, mi))
        val = 2 * k * D * D * lin - Si * quad
        if best is None or val > best:
            best, arg = val, a
    return Prior(tuple(Fraction(x, k) for x in arg))


# -- linear convex order sampling ---------------------------------------------

def _phi(s: Fraction, kinks) -> Fraction:
    return sum((c * max(ZERO, s - th) for c, th in kinks), ZERO)


def _expect(dist, beta, kinks) -> Fraction:
    return sum((w * _phi(dot(beta, p), kinks) for p, w in dist.atoms), ZERO)


def mc_lcx_check(e, e2, mu0, trials: int, seed: int, extra_betas: Sequence = ()) -> bool:
    """Sampled necessary condition for the linear convex order at ``mu0``.

    Each trial draws a direction β in posterior space and a convex
    piecewise-linear φ (at most three kinks, placed inside the observed range
    of β·posterior) and compares the expectations of φ(β·posterior). The
    linear part of φ is dropped since both posterior means equal ``mu0``.
    ``extra_betas`` are checked first with a single kink at 0. Returns False
    on the first strict violation.
    """
    mu0 = mu0 if isinstance(mu0, Prior) else Prior(tuple(mu0))
    if not mu0.interior:
        raise NonInteriorPrior("the prior must give every state positive probability")
    d1, d2 = posteriors(e, mu0), posteriors(e2, mu0)
    N = len(mu0)
    for beta in extra_betas:
        beta = vec(beta)
        if _expect(d1, beta, [(Fraction(1), ZERO)]) < _expect(d2, beta, [(Fraction(1), ZERO)]):
            return False
    rng = random.Random(seed)
    for _ in range(trials):
        beta = tuple(Fraction(rng.randint(-6, 6)) for _ in range(N))
        if not any(beta):
            continue
        vals = [dot(beta, p) for p, _ in d1.atoms + d2.atoms]
        lo, hi = min(vals), max(vals)
        kinks = [(Fraction(rng.randint(1, 5)), lo + (hi - lo) * Fraction(rng.randint(0, 1000), 1000))
                 for _ in range(rng.randint(1, 3))]
        if _expect(d1, beta, kinks) < _expect(d2, beta, kinks):
            return False
    return True


# -- Lagrangian reduction -----------------------------------------------------

def _column_max(a: Fraction, w: Fraction, u: UtilitySpec, column: int) -> Fraction:
    """``max_{t ≥ 0} a·u(t) − w·t`` for a concave piecewise-linear ``u``."""
    last_slope = u.segments()[-1][2]
    if a * last_slope > w:
        raise UnboundedColumn(column)
    ts = [ZERO] if u.is_risk_neutral else [t for t, _ in u.breakpoints]
    return max(a * u.u(t) - w * t for t in ts)


def lagrangian_value(e, beta: Sequence[Fraction], mu0, u: UtilitySpec) -> Fraction:
    A = _mat(e)
    mu = mu0.mu if isinstance(mu0, Prior) else vec(mu0)
    a = A.vecmat(vec(beta))
    w = A.vecmat(mu)
    return sum((_column_max(a[m], w[m], u, m) for m in range(A.n_cols)), ZERO)


def lagrangian_gap(e, e2, beta: Sequence[Fraction], mu0, u: UtilitySpec) -> tuple:
    """``(left, right)``: the value of ``max_{t≥0} β·E u(t) − mu0·E t`` for ``e`` and ``e2``."""
    return lagrangian_value(e, beta, mu0, u), lagrangian_value(e2, beta, mu0, u)
