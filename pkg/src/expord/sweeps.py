"""Seeded random instances and the cost-comparison sweeps behind the equivalence checks.

Every random draw goes through a ``random.Random`` seeded from
``(seed, index)``, so a sweep's report depends only on its inputs.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .exactnum import ONE, ZERO, RatMatrix, dot, render
from .experiments import Experiment, Prior, validate_experiment
from .moralhazard import (RISK_NEUTRAL, Constraints, Environment, UtilitySpec, construct_counterexample,
                          cost_le, implementable, solve, state_utilities, vplus_membership)
from .orders import Order, col_dominates, cone_dominates, zon_dominates


def derived_rng(seed: int, index: int) -> random.Random:
    return random.Random(seed * 1_000_003 + index)


# -- random instances ---------------------------------------------------------

def random_experiment(rng: random.Random, n_states: int, n_realizations: int,
                      max_weight: int = 6) -> Experiment:
    rows = []
    for _ in range(n_states):
        w = [rng.randint(0, max_weight) for _ in range(n_realizations)]
        if not any(w):
            w[rng.randrange(n_realizations)] = 1
        s = sum(w)
        rows.append([Fraction(x, s) for x in w])
    return validate_experiment(RatMatrix.from_rows(rows))


def random_garbling(rng: random.Random, n_in: int, n_out: int) -> RatMatrix:
    return random_experiment(rng, n_in, n_out).matrix


def garble(e: Experiment, G: RatMatrix) -> Experiment:
    return validate_experiment(e.matrix @ G)


def random_prior(rng: random.Random, n: int, interior: bool = True) -> Prior:
    w = [rng.randint(1 if interior else 0, 6) for _ in range(n)]
    if not any(w):
        w[0] = 1
    s = sum(w)
    return Prior(tuple(Fraction(x, s) for x in w))


def random_plc(rng: random.Random, max_segments: int = 3) -> UtilitySpec:
    """Concave piecewise-linear utility through (0, 0) with decreasing slopes."""
    k = rng.randint(1, max_segments)
    slopes = sorted({Fraction(rng.randint(1, 12), 4) for _ in range(k)}, reverse=True)
    pts = [(ZERO, ZERO)]
    for s in slopes:
        t0, u0 = pts[-1]
        dt = Fraction(rng.randint(1, 8), 4)
        pts.append((t0 + dt, u0 + s * dt))
    if len(pts) == 2:
        t0, u0 = pts[-1]
        pts.append((t0 + 1, u0 + slopes[0]))
    return UtilitySpec.plc(pts)


def random_environment(rng: random.Random, n: int, constraints: Constraints,
                       utility: UtilitySpec = RISK_NEUTRAL) -> Environment:
    return Environment(
        mu0=random_prior(rng, n),
        gradient=tuple(Fraction(rng.randint(-20, 20), 10) for _ in range(n)),
        cost_level=Fraction(rng.randint(0, 10), 10),
        outside_option=Fraction(rng.randint(0, 5), 10),
        utility=utility,
        constraints=constraints,
    )


def random_budget(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(5, 30), 10)


# -- sweeps ---------------------------------------------------------------------

THEOREM_ORDER = {1: Order.COL, 2: Order.CONE, 3: Order.ZON}
_DECIDE = {Order.COL: col_dominates, Order.CONE: cone_dominates, Order.ZON: zon_dominates}


def _cost_text(s) -> str:
    return "inf" if s.cost is None else render(s.cost)


def _trial_cases(theorem: int, rng: random.Random, n: int) -> list:
    """``(label, environment)`` pairs checked in one trial."""
    if theorem == 1:
        return [("none/rn", random_environment(rng, n, Constraints.none()))]
    if theorem == 2:
        return [("ll/rn", random_environment(rng, n, Constraints.ll())),
                ("b_only/rn", random_environment(rng, n, Constraints.b_only(random_budget(rng))))]
    u = random_plc(rng)
    return [("ll_b/rn", random_environment(rng, n, Constraints.ll_b(random_budget(rng)))),
            ("ll/plc", random_environment(rng, n, Constraints.ll(), u)),
            ("ll_b/plc", random_environment(rng, n, Constraints.ll_b(random_budget(rng)), u))]


def compare_environment(e, e2, env: Environment) -> Optional[dict]:
    """A violation record if ``e`` is costlier or implements less than ``e2``, else None."""
    s1, s2 = solve(e, env), solve(e2, env)
    cost_ok = cost_le(s1, s2)
    impl_ok = implementable(e, env) or not implementable(e2, env)
    if cost_ok and impl_ok:
        return None
    return {"environment": env.to_json(), "cost_e": _cost_text(s1), "cost_e2": _cost_text(s2),
            "cost_ok": cost_ok, "implementability_ok": impl_ok}


def random_vplus_point(rng: random.Random, e2, mu0: Prior, u: UtilitySpec) -> tuple:
    """A point accepted by ``vplus_membership(e2, ·)`` and a budget that admits it."""
    M = e2.n_realizations
    t = tuple(Fraction(rng.randint(0, 12), 4) if rng.random() < 0.7 else ZERO for _ in range(M))
    x = state_utilities(e2, t, u)
    pay = dot(e2.matrix.vecmat(mu0.mu), t)
    return x, pay + Fraction(rng.randint(0, 4), 4)


def vplus_sweep(e, e2, points: int, seed: int) -> list:
    """Violations of ``V⁺(e) ⊇ V⁺(e2)`` over random points, priors, utilities and budgets."""
    out = []
    n = e.n_states
    for i in range(points):
        rng = derived_rng(seed, 10_000 + i)
        mu0 = random_prior(rng, n)
        u = random_plc(rng) if rng.random() < 0.7 else RISK_NEUTRAL
        x, B = random_vplus_point(rng, e2, mu0, u)
        if vplus_membership(e2, x, mu0, u, B) and not vplus_membership(e, x, mu0, u, B):
            out.append({"index": i, "point": [render(v) for v in x], "mu0": [render(v) for v in mu0],
                        "utility": u.to_json(), "B": render(B)})
    return out


def sweep(theorem: int, e, e2, trials: int, seed: int, vplus_points: int = 0) -> dict:
    """Cost comparisons for one theorem's constraint classes, or its counterexample.

    When the theorem's order holds every sampled environment must rank ``e``
    weakly cheaper (and implement weakly more); otherwise the constructed
    environments are reported with their costs.
    """
    order = THEOREM_ORDER[theorem]
    holds = _DECIDE[order](e, e2).dominates
    report = {"theorem": theorem, "order": order.value, "dominates": holds,
              "trials": trials, "seed": seed, "checks": 0, "violations": [], "counterexamples": []}
    if holds:
        for i in range(trials):
            rng = derived_rng(seed, i)
            for label, env in _trial_cases(theorem, rng, e.n_states):
                report["checks"] += 1
                bad = compare_environment(e, e2, env)
                if bad is not None:
                    report["violations"].append({"trial": i, "case": label, **bad})
        if theorem == 3 and vplus_points:
            report["checks"] += vplus_points
            report["violations"].extend(vplus_sweep(e, e2, vplus_points, seed))
    else:
        variants = [False, True] if theorem == 2 else [False]
        for budget_only in variants:
            ce = construct_counterexample(order, e, e2, budget_only=budget_only)
            rec = ce.to_json("E", "E'")
            rec["class"] = ce.env.constraints.kind.value
            report["counterexamples"].append(rec)
    return report
