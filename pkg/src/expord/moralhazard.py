"""Cost-minimizing contracts for a flexible-production agent.

The principal implements a target distribution ``mu0`` over states using a
contract ``t`` on realizations. Only local cost data enter the program: the
gradient ``g`` of the agent's cost at ``mu0`` and its level ``c0``. Incentive
compatibility is the stationarity condition

    E u(t) = g + λ·1 + η,   η ≥ 0,   ηₙ = 0 wherever mu0 is positive,

and the agent's participation requires ``mu0·E·u(t) − c0 ≥ u̲``.

Risk-averse agents are limited to piecewise-linear concave utilities. The
program is then written in utility levels ``v = u(t)``, with the convex
inverse ``u⁻¹`` handled through epigraph variables, so everything stays an
exact LP.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

from .exactnum import ONE, ZERO, DimensionMismatch, RatMatrix, dot, parse_rational, render, vec
from .experiments import Experiment, Prior
from .lp import LpProblem, Status, solve_lp
from .orders import Order, col_dominates, cone_dominates, zon_dominates


class InvalidUtility(ValueError):
    pass


class InvalidEnvironment(ValueError):
    pass


class OrderActuallyHolds(ValueError):
    pass


# -- utilities ----------------------------------------------------------------

@dataclass(frozen=True)
class UtilitySpec:
    """``breakpoints is None`` means risk neutral, ``u(t) = t``.

    Otherwise ``u`` interpolates the breakpoints ``(t, u)`` and continues with
    the first slope below 0 and the last slope beyond the final point.
    """

    breakpoints: Optional[tuple] = None

    def __post_init__(self):
        if self.breakpoints is None:
            return
        pts = tuple((parse_rational(t), parse_rational(u)) for t, u in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        if len(pts) < 2:
            raise InvalidUtility("need at least two breakpoints")
        if pts[0] != (ZERO, ZERO):
            raise InvalidUtility("first breakpoint must be (0, 0)")
        slopes = []
        for (t0, u0), (t1, u1) in zip(pts, pts[1:]):
            if t1 <= t0 or u1 <= u0:
                raise InvalidUtility("breakpoints must be strictly increasing in t and u")
            slopes.append((u1 - u0) / (t1 - t0))
        if any(b > a for a, b in zip(slopes, slopes[1:])):
            raise InvalidUtility("slopes must be non-increasing")

    @classmethod
    def risk_neutral(cls) -> "UtilitySpec":
        return cls(None)

    @classmethod
    def plc(cls, breakpoints) -> "UtilitySpec":
        return cls(tuple(breakpoints))

    @property
    def is_risk_neutral(self) -> bool:
        return self.breakpoints is None

    def segments(self) -> list:
        """``(t_k, u_k, slope_k)`` for each segment, the last one unbounded."""
        if self.is_risk_neutral:
            return [(ZERO, ZERO, ONE)]
        pts = self.breakpoints
        return [(t0, u0, (u1 - u0) / (t1 - t0)) for (t0, u0), (t1, u1) in zip(pts, pts[1:])]

    def u(self, t: Fraction) -> Fraction:
        if self.is_risk_neutral:
            return Fraction(t)
        segs = self.segments()
        # concave: the minimum of the extended segment lines
        return min(u0 + s * (t - t0) for t0, u0, s in segs)

    def inverse(self, v: Fraction) -> Fraction:
        if self.is_risk_neutral:
            return Fraction(v)
        return max(t0 + (v - u0) / s for t0, u0, s in self.segments())

    def to_json(self) -> dict:
        if self.is_risk_neutral:
            return {"kind": "risk_neutral"}
        return {"kind": "plc", "breakpoints": [[render(t), render(u)] for t, u in self.breakpoints]}

    @classmethod
    def from_json(cls, d: dict) -> "UtilitySpec":
        kind = d.get("kind")
        if kind == "risk_neutral":
            return cls.risk_neutral()
        if kind == "plc":
            return cls.plc(d["breakpoints"])
        raise InvalidUtility(f"unknown utility kind {kind!r}")


RISK_NEUTRAL = UtilitySpec.risk_neutral()


# -- environments ---------------------------------------------------------------

class ConstraintKind(enum.Enum):
    NONE = "none"
    LL = "ll"
    LL_B = "ll_b"
    B_ONLY = "b_only"


@dataclass(frozen=True)
class Constraints:
    kind: ConstraintKind = ConstraintKind.NONE
    B: Optional[Fraction] = None

    def __post_init__(self):
        has_budget = self.kind in (ConstraintKind.LL_B, ConstraintKind.B_ONLY)
        if has_budget:
            if self.B is None or Fraction(self.B) <= 0:
                raise InvalidEnvironment("budget B must be positive")
            object.__setattr__(self, "B", Fraction(self.B))
        elif self.B is not None:
            raise InvalidEnvironment(f"{self.kind.value} takes no budget")

    @classmethod
    def none(cls):
        return cls(ConstraintKind.NONE)

    @classmethod
    def ll(cls):
        return cls(ConstraintKind.LL)

    @classmethod
    def ll_b(cls, B):
        return cls(ConstraintKind.LL_B, B)

    @classmethod
    def b_only(cls, B):
        return cls(ConstraintKind.B_ONLY, B)

    @property
    def lower(self) -> bool:
        return self.kind in (ConstraintKind.LL, ConstraintKind.LL_B)

    def to_json(self) -> dict:
        out = {"kind": self.kind.value}
        if self.B is not None:
            out["B"] = render(self.B)
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Constraints":
        kind = ConstraintKind(d.get("kind", "none"))
        B = d.get("B")
        return cls(kind, None if B is None else parse_rational(B))


@dataclass(frozen=True)
class Environment:
    mu0: Prior
    gradient: tuple
    cost_level: Fraction = ZERO
    outside_option: Fraction = ZERO
    utility: UtilitySpec = RISK_NEUTRAL
    constraints: Constraints = Constraints()

    def __post_init__(self):
        mu0 = self.mu0 if isinstance(self.mu0, Prior) else Prior(tuple(self.mu0))
        object.__setattr__(self, "mu0", mu0)
        object.__setattr__(self, "gradient", vec(self.gradient))
        object.__setattr__(self, "cost_level", Fraction(self.cost_level))
        object.__setattr__(self, "outside_option", Fraction(self.outside_option))
        if len(self.gradient) != len(mu0):
            raise DimensionMismatch(f"gradient of length {len(self.gradient)} for {len(mu0)} states")
        if self.cost_level < 0:
            raise InvalidEnvironment("cost level must be non-negative")

    @property
    def n_states(self) -> int:
        return len(self.mu0)

    def with_constraints(self, c: Constraints) -> "Environment":
        return replace(self, constraints=c)

    def to_json(self) -> dict:
        return {
            "mu0": [render(x) for x in self.mu0],
            "gradient": [render(x) for x in self.gradient],
            "cost_level": render(self.cost_level),
            "outside_option": render(self.outside_option),
            "utility": self.utility.to_json(),
            "constraints": self.constraints.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Environment":
        return cls(
            mu0=Prior(vec(d["mu0"])),
            gradient=vec(d["gradient"]),
            cost_level=parse_rational(d.get("cost_level", "0")),
            outside_option=parse_rational(d.get("outside_option", "0")),
            utility=UtilitySpec.from_json(d.get("utility", {"kind": "risk_neutral"})),
            constraints=Constraints.from_json(d.get("constraints", {"kind": "none"})),
        )


@dataclass(frozen=True)
class MhSolution:
    """``cost is None`` encodes K = ∞ (no feasible contract)."""

    optimal: bool
    cost: Optional[Fraction] = None
    t: Optional[tuple] = None
    lam: Optional[Fraction] = None
    eta: Optional[tuple] = None

    @property
    def infinite(self) -> bool:
        return not self.optimal

    def cost_key(self) -> tuple:
        """Sort key placing ∞ above every finite cost."""
        return (1, ZERO) if self.cost is None else (0, self.cost)

    def to_json(self) -> dict:
        if not self.optimal:
            return {"status": "infeasible", "cost": "inf"}
        return {
            "status": "optimal",
            "cost": render(self.cost),
            "t": [render(x) for x in self.t],
            "lambda": render(self.lam),
            "eta": [render(x) for x in self.eta],
        }


INFEASIBLE = MhSolution(False)


def cost_le(a: MhSolution, b: MhSolution) -> bool:
    return a.cost_key() <= b.cost_key()


def cost_lt(a: MhSolution, b: MhSolution) -> bool:
    return a.cost_key() < b.cost_key()


# -- the program ----------------------------------------------------------------

def _mat(e) -> RatMatrix:
    return e.matrix if isinstance(e, Experiment) else e


class _Program:
    """Column layout: v (M), τ (M, PLC only), λ, η (zero-prior states), then slacks."""

    def __init__(self, A: RatMatrix, env: Environment, gradient, with_pc: bool,
                 utility: UtilitySpec, v_bounds):
        N, M = A.n_rows, A.n_cols
        mu = env.mu0.mu
        self.M = M
        self.rn = utility.is_risk_neutral
        self.w = A.vecmat(mu)
        self.zero_states = [n for n in range(N) if mu[n] == 0]
        segs = utility.segments()
        n_tau = 0 if self.rn else M
        n_eta = len(self.zero_states)
        n_epi = 0 if self.rn else M * len(segs)
        self.i_tau = M
        self.i_lam = M + n_tau
        self.i_eta = self.i_lam + 1
        i_epi = self.i_eta + n_eta
        i_pc = i_epi + n_epi
        n = i_pc + (1 if with_pc else 0)

        rows, rhs = [], []
        # stationarity: (E v)_n − λ − η_n = g_n
        for k in range(N):
            r = [ZERO] * n
            for m in range(M):
                r[m] = A[k, m]
            r[self.i_lam] = -ONE
            if k in self.zero_states:
                r[self.i_eta + self.zero_states.index(k)] = -ONE
            rows.append(r)
            rhs.append(gradient[k])
        # epigraph: τ_m − v_m / s − σ = t0 − u0 / s
        col = i_epi
        if not self.rn:
            for m in range(M):
                for t0, u0, s in segs:
                    r = [ZERO] * n
                    r[self.i_tau + m] = ONE
                    r[m] = -ONE / s
                    r[col] = -ONE
                    rows.append(r)
                    rhs.append(t0 - u0 / s)
                    col += 1
        if with_pc:
            r = [ZERO] * n
            for m in range(M):
                r[m] = self.w[m]
            r[i_pc] = -ONE
            rows.append(r)
            rhs.append(env.outside_option + env.cost_level)

        bounds = ([v_bounds] * M + [(None, None)] * n_tau + [(None, None)]
                  + [(ZERO, None)] * (n - M - n_tau - 1))
        obj = [ZERO] * n
        pay = range(self.i_tau, self.i_tau + M) if not self.rn else range(M)
        for m, j in enumerate(pay):
            obj[j] = self.w[m]
        self.objective = tuple(obj)
        self.A = RatMatrix.from_rows(rows, n_cols=n)
        self.b = tuple(rhs)
        self.bounds = tuple(bounds)
        self.n = n

    def problem(self, minimize_cost: bool) -> LpProblem:
        c = self.objective if minimize_cost else (ZERO,) * self.n
        return LpProblem(c, self.A, self.b, self.bounds)


def _v_bounds(utility: UtilitySpec, cons: Constraints):
    lo = ZERO if cons.lower else None
    hi = utility.u(cons.B) if cons.B is not None else None
    return (lo, hi)


def _canonical_gradient(env: Environment) -> tuple:
    shift = dot(env.mu0.mu, env.gradient)
    return tuple(x - shift for x in env.gradient), shift


def _check_dims(A: RatMatrix, env: Environment):
    if A.n_rows != env.n_states:
        raise DimensionMismatch(f"experiment has {A.n_rows} states, environment {env.n_states}")


def solve(e, env: Environment) -> MhSolution:
    """Minimum expected payment implementing ``env.mu0``; INFEASIBLE stands for K = ∞.

    The gradient is first shifted to have zero ``mu0``-mean. The program is
    unchanged by such shifts apart from λ, so adding ``k·1`` to ``g`` gives
    the same contract and cost and moves λ by exactly ``−k``.
    """
    A = _mat(e)
    _check_dims(A, env)
    g, shift = _canonical_gradient(env)
    prog = _Program(A, env, g, True, env.utility, _v_bounds(env.utility, env.constraints))
    out = solve_lp(prog.problem(True))
    if out.status is Status.INFEASIBLE:
        return INFEASIBLE
    if out.status is Status.UNBOUNDED:
        # participation bounds the objective below, so this cannot happen
        raise RuntimeError("contracting program reported unbounded")
    x = out.x
    v = x[:prog.M]
    t = tuple(env.utility.inverse(y) for y in v)
    eta = [ZERO] * env.n_states
    for k, n in enumerate(prog.zero_states):
        eta[n] = x[prog.i_eta + k]
    cost = dot(prog.w, t)
    return MhSolution(True, cost, t, x[prog.i_lam] - shift, tuple(eta))


def implementable(e, env: Environment, keep_pc: bool = False) -> bool:
    """Whether some contract satisfies IC and the constraint class.

    Participation is ignored unless ``keep_pc``: without payment bounds a lump
    sum restores it, which is what finiteness of K depends on.
    """
    A = _mat(e)
    _check_dims(A, env)
    g, _ = _canonical_gradient(env)
    prog = _Program(A, env, g, keep_pc, env.utility, _v_bounds(env.utility, env.constraints))
    return solve_lp(prog.problem(False)).feasible


def state_utilities(e, t: Sequence[Fraction], utility: UtilitySpec) -> tuple:
    A = _mat(e)
    if len(t) != A.n_cols:
        raise DimensionMismatch(f"contract of length {len(t)} for {A.n_cols} realizations")
    return A.matvec(tuple(utility.u(x) for x in t))


def check_ic(e, t: Sequence[Fraction], env: Environment) -> bool:
    """Existence of λ and η ≥ 0 (zero on the support of mu0) with ``E u(t) = g + λ1 + η``.

    Solved in closed form: ``E u(t) − g`` must be constant on the support and
    no smaller off it.
    """
    d = [a - b for a, b in zip(state_utilities(e, t, env.utility), env.gradient)]
    support = [d[n] for n, p in enumerate(env.mu0) if p > 0]
    lam = support[0]
    if any(x != lam for x in support):
        return False
    return all(x >= lam for n, x in enumerate(d) if env.mu0[n] == 0)


def check_pc(e, t: Sequence[Fraction], env: Environment) -> bool:
    x = state_utilities(e, t, env.utility)
    return dot(env.mu0.mu, x) - env.cost_level >= env.outside_option


def check_constraints(t: Sequence[Fraction], cons: Constraints) -> bool:
    if cons.lower and any(x < 0 for x in t):
        return False
    if cons.B is not None and any(x > cons.B for x in t):
        return False
    return True


def agent_payoff(mu, e, t: Sequence[Fraction], env: Environment, cost_at_mu: Fraction) -> Fraction:
    mu = mu.mu if isinstance(mu, Prior) else vec(mu)
    x = state_utilities(e, t, env.utility)
    if len(mu) != len(x):
        raise DimensionMismatch(f"distribution of length {len(mu)} for {len(x)} states")
    return dot(mu, x) - Fraction(cost_at_mu)


def vplus_membership(e, x: Sequence[Fraction], mu0, u: UtilitySpec, B: Fraction) -> bool:
    """Is there ``t ≥ 0`` with ``E u(t) = x`` and expected payment ``mu0·E·t ≤ B``?"""
    A = _mat(e)
    x = vec(x)
    mu = mu0.mu if isinstance(mu0, Prior) else vec(mu0)
    if len(x) != A.n_rows or len(mu) != A.n_rows:
        raise DimensionMismatch("point and prior must have one entry per state")
    N, M = A.n_rows, A.n_cols
    w = A.vecmat(mu)
    segs = u.segments()
    rn = u.is_risk_neutral
    n_epi = 0 if rn else M * len(segs)
    i_tau, i_epi = M, M + (0 if rn else M)
    n = i_epi + n_epi + 1
    rows, rhs = [], []
    for k in range(N):
        r = [ZERO] * n
        for m in range(M):
            r[m] = A[k, m]
        rows.append(r)
        rhs.append(x[k])
    col = i_epi
    if not rn:
        for m in range(M):
            for t0, u0, s in segs:
                r = [ZERO] * n
                r[i_tau + m] = ONE
                r[m] = -ONE / s
                r[col] = -ONE
                rows.append(r)
                rhs.append(t0 - u0 / s)
                col += 1
    r = [ZERO] * n
    for m in range(M):
        r[m if rn else i_tau + m] = w[m]
    r[n - 1] = ONE
    rows.append(r)
    rhs.append(Fraction(B))
    bounds = [(ZERO, None)] * M + [(None, None)] * (0 if rn else M) + [(ZERO, None)] * (n_epi + 1)
    p = LpProblem((ZERO,) * n, RatMatrix.from_rows(rows, n_cols=n), tuple(rhs), tuple(bounds))
    return solve_lp(p).feasible


# -- counterexamples ----------------------------------------------------------

@dataclass(frozen=True)
class Counterexample:
    """Environment where ``dominant`` (the first operand) is strictly costlier.

    ``strict`` records whether the reversal actually materialized.
    """

    order: Order
    env: Environment
    witness: tuple
    solution_e: MhSolution
    solution_e2: MhSolution

    @property
    def strict(self) -> bool:
        return cost_lt(self.solution_e2, self.solution_e)

    def to_json(self, name_e: str = "E", name_e2: str = "E'") -> dict:
        def c(s):
            return "inf" if s.cost is None else render(s.cost)
        return {
            "order": self.order.value,
            "environment": self.env.to_json(),
            "witness": [render(x) for x in self.witness],
            "guarantee": {name_e: c(self.solution_e), name_e2: c(self.solution_e2)},
            "strict": self.strict,
        }


def _counterexample_env(x, cons: Constraints) -> Environment:
    mu0 = Prior.uniform(len(x))
    if cons.kind is ConstraintKind.B_ONLY:
        # risk-neutral cost here is c0 whenever feasible, so participation must
        # bind at λ = 0: reachable from Cone E′ (it holds 1 − g) but not Cone E
        c0 = max(dot(mu0.mu, x), ZERO)
    else:
        # a small positive cost level keeps participation slack on the dominated side
        c0 = min(dot(mu0.mu, x), ONE) / 2
    return Environment(mu0, x, c0, ZERO, RISK_NEUTRAL, cons)


def construct_counterexample(order: Order, e, e2, budget_only: bool = False) -> Counterexample:
    """Risk-neutral environment in which ``e2`` implements ``mu0`` strictly cheaper than ``e``.

    ``e`` must fail to dominate ``e2`` in ``order``. The gradient is the
    order's witness point; the constraint class is the one whose cost
    comparison the order characterizes (none, LL, LL with budget 1). With
    ``budget_only`` the Cone case instead uses the budget-only class, whose
    feasible utility set is ``1 − Cone E``, so the gradient is ``1 − x`` and
    the cost level makes participation bind at λ = 0.
    """
    order = Order(order)
    if order is Order.COL:
        verdict, cons = col_dominates(e, e2), Constraints.none()
    elif order is Order.CONE:
        verdict = cone_dominates(e, e2)
        cons = Constraints.b_only(ONE) if budget_only else Constraints.ll()
    elif order is Order.ZON:
        verdict, cons = zon_dominates(e, e2), Constraints.ll_b(ONE)
    else:
        raise ValueError("counterexamples are built for col, cone and zon only")
    if verdict.dominates:
        raise OrderActuallyHolds(f"{order.value} dominance holds")
    x = verdict.certificate.point
    candidates = [x]
    if order is Order.ZON:
        candidates.append(tuple(ONE - a for a in x))
    if order is Order.CONE and budget_only:
        candidates = [tuple(ONE - a for a in x)]
    result = None
    for g in candidates:
        env = _counterexample_env(g, cons)
        result = Counterexample(order, env, g, solve(e, env), solve(e2, env))
        if result.strict:
            return result
    return result
