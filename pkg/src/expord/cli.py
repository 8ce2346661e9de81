"""``expord`` command-line interface.

Exit codes: 0 success (or "dominates"), 3 a negative answer, 1 bad input,
2 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from .exactnum import parse_rational, render, vec
from .experiments import Prior, experiment_from_json, posteriors, weighted_experiment
from .moralhazard import (Environment, UtilitySpec, RISK_NEUTRAL, construct_counterexample,
                          implementable, solve)
from .oracle import (QuadraticCost, SimplexGrid, grid_best_response, lagrangian_gap,
                     mc_lcx_check, zon_membership_by_facets)
from .orders import DECIDERS, Order, relations_summary, zon_dominates
from .plot import render_posteriors, render_sets
from .sweeps import sweep

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL, EXIT_NO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def default_seed() -> int:
    raw = os.environ.get("EXPORD_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"EXPORD_SEED must be an integer, got {raw!r}") from None


# -- input helpers ----------------------------------------------------------

def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON ({exc})") from None


def load_experiment(path: str):
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: expected a JSON object")
    return experiment_from_json(doc)


def load_environment(path: str) -> Environment:
    try:
        return Environment.from_json(_load_json(path))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path}: malformed environment ({exc})") from None


def load_utility(path):
    if path is None:
        return RISK_NEUTRAL
    return UtilitySpec.from_json(_load_json(path))


def parse_vector(text: str) -> tuple:
    """A comma-separated list of rationals, or a JSON file holding a list or a prior."""
    if os.path.isfile(text):
        doc = _load_json(text)
        if isinstance(doc, dict) and "mu" in doc:
            doc = doc["mu"]
        if not isinstance(doc, list):
            raise UsageError(f"{text}: expected a list of rationals")
        return vec(str(x) for x in doc)
    return tuple(parse_rational(x) for x in text.split(","))


def parse_prior(text: str) -> Prior:
    return Prior(parse_vector(text))


def digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


# -- commands -----------------------------------------------------------------

def cmd_validate(args) -> int:
    emit(load_experiment(args.file).to_json())
    return EXIT_OK


def cmd_compare(args) -> int:
    a, b = load_experiment(args.a), load_experiment(args.b)
    if args.order == "all":
        emit(relations_summary(a, b))
        return EXIT_OK
    verdict = DECIDERS[Order(args.order)](a, b)
    emit(verdict.to_json())
    return EXIT_OK if verdict.dominates else EXIT_NO


def cmd_posteriors(args) -> int:
    e = load_experiment(args.file)
    emit(posteriors(e, parse_prior(args.prior)).to_json())
    return EXIT_OK


def cmd_mh(args) -> int:
    if args.mh_command == "solve":
        emit(solve(load_experiment(args.experiment), load_environment(args.environment)).to_json())
        return EXIT_OK
    if args.mh_command == "implementable":
        ok = implementable(load_experiment(args.experiment), load_environment(args.environment),
                           keep_pc=args.keep_pc)
        emit({"implementable": ok})
        return EXIT_OK if ok else EXIT_NO
    a, b = load_experiment(args.a), load_experiment(args.b)
    ce = construct_counterexample(Order(args.order), a, b, budget_only=args.budget_only)
    record = ce.to_json(Path(args.a).stem, Path(args.b).stem)
    if args.env_out:
        Path(args.env_out).write_text(json.dumps(ce.env.to_json(), indent=2) + "\n", encoding="utf-8")
    emit(record)
    return EXIT_OK


def cmd_sweep(args) -> int:
    a, b = load_experiment(args.a), load_experiment(args.b)
    seed = default_seed() if args.seed is None else args.seed
    start = time.perf_counter()
    result = sweep(args.theorem, a, b, args.trials, seed, vplus_points=args.vplus)
    report = {
        "command": f"sweep {args.theorem}",
        "inputs": {"a": {"path": args.a, "sha256": digest(args.a)},
                   "b": {"path": args.b, "sha256": digest(args.b)}},
        "seed": seed,
        "result": result,
    }
    if args.timing:
        report["elapsed_ms"] = round((time.perf_counter() - start) * 1000)
    emit(report)
    failed = result["violations"] or any(not c["strict"] for c in result["counterexamples"])
    return EXIT_NO if failed else EXIT_OK


def cmd_oracle(args) -> int:
    kind = args.oracle_command
    if kind == "facets":
        ok = zon_membership_by_facets(load_experiment(args.file), parse_vector(args.point))
        emit({"member": ok})
        return EXIT_OK if ok else EXIT_NO
    if kind == "bestresponse":
        e = load_experiment(args.file)
        cost = QuadraticCost(parse_prior(args.center), parse_rational(args.scale))
        mu = grid_best_response(e, parse_vector(args.contract), load_utility(args.utility), cost,
                                SimplexGrid(e.n_states, args.k))
        emit({"best_response": [render(x) for x in mu]})
        return EXIT_OK
    if kind == "lcx":
        a, b = load_experiment(args.a), load_experiment(args.b)
        mu0 = parse_prior(args.prior)
        seed = default_seed() if args.seed is None else args.seed
        extra = []
        if args.witness:
            v = zon_dominates(weighted_experiment(a, mu0), weighted_experiment(b, mu0))
            if not v.dominates:
                extra.append(v.certificate.beta)
        ok = mc_lcx_check(a, b, mu0, args.trials, seed, extra)
        emit({"consistent": ok, "trials": args.trials, "seed": seed})
        return EXIT_OK if ok else EXIT_NO
    a, b = load_experiment(args.a), load_experiment(args.b)
    left, right = lagrangian_gap(a, b, parse_vector(args.beta), parse_prior(args.prior),
                                 load_utility(args.utility))
    emit({"left": render(left), "right": render(right)})
    return EXIT_OK


def cmd_plot(args) -> int:
    exps = [load_experiment(f) for f in args.files]
    names = [Path(f).stem for f in args.files]
    if args.kind == "posteriors":
        if args.prior is None:
            raise UsageError("plot posteriors needs --prior")
        svg = render_posteriors(exps, names, parse_prior(args.prior))
    else:
        svg = render_sets(args.kind, exps, names)
    if args.out:
        Path(args.out).write_text(svg, encoding="utf-8")
    else:
        sys.stdout.write(svg)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="expord", description="Compare finite experiments and solve contracting problems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check an experiment file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("compare", help="decide an order between two experiments")
    s.add_argument("order", choices=[o.value for o in Order] + ["all"])
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("posteriors", help="Bayes posteriors under a prior")
    s.add_argument("file")
    s.add_argument("--prior", required=True, help="comma list or prior JSON file")
    s.set_defaults(func=cmd_posteriors)

    mh = sub.add_parser("mh", help="contracting problems")
    msub = mh.add_subparsers(dest="mh_command", required=True, parser_class=_Parser)
    for name in ("solve", "implementable"):
        s = msub.add_parser(name)
        s.add_argument("experiment")
        s.add_argument("environment")
        if name == "implementable":
            s.add_argument("--keep-pc", action="store_true", help="also require participation")
    s = msub.add_parser("counterexample")
    s.add_argument("--order", required=True, choices=["col", "cone", "zon"])
    s.add_argument("--budget-only", action="store_true", help="cone only: use the budget-only class")
    s.add_argument("--env-out", help="also write the environment JSON here")
    s.add_argument("a")
    s.add_argument("b")
    mh.set_defaults(func=cmd_mh)

    s = sub.add_parser("sweep", help="random cost comparisons for one theorem")
    s.add_argument("theorem", type=int, choices=[1, 2, 3])
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int)
    s.add_argument("--vplus", type=int, default=0, help="extra V+ membership points (theorem 3)")
    s.add_argument("--timing", action="store_true", help="include elapsed_ms (breaks byte-identity)")
    s.set_defaults(func=cmd_sweep)

    orc = sub.add_parser("oracle", help="brute-force cross-checks")
    osub = orc.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    s = osub.add_parser("facets")
    s.add_argument("file")
    s.add_argument("--point", required=True)
    s = osub.add_parser("bestresponse")
    s.add_argument("file")
    s.add_argument("--contract", required=True)
    s.add_argument("--center", required=True)
    s.add_argument("--scale", required=True)
    s.add_argument("--k", type=int, default=100)
    s.add_argument("--utility")
    s = osub.add_parser("lcx")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--prior", required=True)
    s.add_argument("--trials", type=int, default=500)
    s.add_argument("--seed", type=int)
    s.add_argument("--witness", action="store_true", help="also test the zonotope witness direction")
    s = osub.add_parser("lagrangian")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--beta", required=True)
    s.add_argument("--prior", required=True)
    s.add_argument("--utility")
    orc.set_defaults(func=cmd_oracle)

    s = sub.add_parser("plot", help="SVG of cones, zonotopes or posteriors")
    s.add_argument("kind", choices=["cone", "zon", "posteriors"])
    s.add_argument("files", nargs="+")
    s.add_argument("--prior")
    s.add_argument("--out")
    s.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        sys.stderr.write(f"expord: error: {exc}\n")
        return EXIT_USAGE
    except Exception as exc:  # anything else is a bug
        sys.stderr.write(f"expord: internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
