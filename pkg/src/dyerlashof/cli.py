"""Command line front end.

    dyerlashof eval "Q^2 xi1" --context p2-dual
    dyerlashof eval "b Q^1 tau0" --context p3-dual --basis conjugate
    dyerlashof run example-fp-p2 classify-table --p 2 --n-max 6
    dyerlashof classify --p 3 --n-max 10 --json
    dyerlashof free zeta1@4 taubar1@5 --p 3 --bound 16

Exit status is 0 when everything asked for succeeded (for ``run``: every
assertion passed), 1 on a failed assertion or missing table data, and 2 on
bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import classify
from .config import ConfigError, element_from_ast, load_context
from .dual_steenrod import SteenrodDual
from .fp_graded import AlgebraError
from .op_expr.action import DegreeBoundExceeded, MissingTableEntry
from .op_expr.grammar import AtomRef, ParseError, check_word, evaluate, parse_ast
from .r_algebra import AlgebraPresentation
from .scenarios import SCENARIOS, UnknownScenario, run_scenario
from .unstable_free import enumerate_generators, free_algebra_on


def _emit(args, data, text: str):
    print(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) if args.json else text)


# -- eval --------------------------------------------------------------------------


def _eval_presentation(X: AlgebraPresentation, text: str):
    node = parse_ast(text)
    check_word(X.p, node, text)

    def atom(ref: AtomRef):
        return element_from_ast(X.free, ref, text)

    value = evaluate(node, const=X.free.scalar, atom=atom, apply=lambda w, x: X.q_value(w, x), text=text)
    return X.reduce(value)


def cmd_eval(args) -> int:
    ctx = load_context(args.context, args.p, args.bound)
    if isinstance(ctx, SteenrodDual):
        value = ctx.evaluate(args.expr, args.side)
        if args.basis == "conjugate":
            value = ctx.to_conjugate(value)
    else:
        if args.basis == "conjugate":
            raise ConfigError("--basis conjugate needs a dual Steenrod context")
        value = _eval_presentation(ctx, args.expr)
    _emit(args, {"expr": args.expr, "p": ctx.p, "value": str(value)}, str(value))
    return 0


# -- run ---------------------------------------------------------------------------


def _run_one(job):
    name, params = job
    return run_scenario(name, params)


def cmd_run(args) -> int:
    names = sorted(SCENARIOS) if args.all else args.scenarios
    if not names:
        raise UnknownScenario("name at least one scenario, or pass --all")
    for n in names:
        if n not in SCENARIOS:
            raise UnknownScenario(f"unknown scenario {n!r}; known: {', '.join(sorted(SCENARIOS))}")
    params = {"p": args.p, "bound": args.bound, "n_max": args.n_max}
    jobs = [(n, params) for n in names]
    if args.parallel and len(jobs) > 1:
        with ProcessPoolExecutor() as pool:
            reports = list(pool.map(_run_one, jobs))
    else:
        reports = [_run_one(j) for j in jobs]
    if args.json:
        docs = [json.loads(r.to_json(with_time=not args.no_time)) for r in reports]
        print(json.dumps(docs[0] if len(docs) == 1 else docs, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print("\n".join(r.to_text() for r in reports))
    return 0 if all(r.passed for r in reports) else 1


# -- classify ----------------------------------------------------------------------


def cmd_classify(args) -> int:
    primes = [args.p] if args.p else [2, 3, 5]
    data = {str(p): classify.classification_table(p, args.n_max) for p in primes}
    text = "\n\n".join(classify.format_table(p, data[str(p)]) for p in primes)
    _emit(args, data, text)
    return 0


# -- free --------------------------------------------------------------------------


def _parse_gen(token: str):
    name, sep, deg = token.partition("@")
    if not sep or not deg.isdigit():
        raise ConfigError(f"generators are written name@degree, got {token!r}")
    return name, int(deg)


def cmd_free(args) -> int:
    p = args.p or 2
    bound = args.bound if args.bound is not None else 2 * p * p
    gens = [_parse_gen(t) for t in args.generators]
    found = enumerate_generators(p, gens, bound)
    series = free_algebra_on(p, found, bound).poincare_series()
    data = {
        "p": p,
        "bound": bound,
        "generators": [{"word": g.text, "degree": g.degree, "parity": g.parity} for g in found],
        "poincare": series,
    }
    lines = [f"{g.degree:>4}  {g.parity:<4}  {g.text}" for g in found]
    lines.append("poincare: " + " ".join(str(d) for d in series))
    _emit(args, data, "\n".join(lines))
    return 0


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=None, help="prime")
    common.add_argument("--bound", type=int, default=None, help="degree bound")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="dyerlashof", description="Dyer-Lashof operations over F_p")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    ev.add_argument("expr")
    ev.add_argument("--context", default=None, help="p2-dual, p3-dual or a YAML/JSON config file")
    ev.add_argument("--side", choices=("left", "right"), default="left")
    ev.add_argument("--basis", choices=("milnor", "conjugate"), default="milnor")
    ev.set_defaults(func=cmd_eval)

    run = sub.add_parser("run", parents=[common], help="run packaged scenarios")
    run.add_argument("scenarios", nargs="*")
    run.add_argument("--all", action="store_true")
    run.add_argument("--n-max", type=int, default=None)
    run.add_argument("--parallel", action="store_true")
    run.add_argument("--no-time", action="store_true", help="leave wall time out of JSON output")
    run.set_defaults(func=cmd_run)

    cl = sub.add_parser("classify", parents=[common], help="Postnikov extension table")
    cl.add_argument("--n-max", type=int, default=10)
    cl.set_defaults(func=cmd_classify)

    fr = sub.add_parser("free", parents=[common], help="free unstable algebra generators")
    fr.add_argument("generators", nargs="*", help="name@degree")
    fr.set_defaults(func=cmd_free)

    sub.add_parser("list", help="list scenarios").set_defaults(func=cmd_list)
    return parser


def cmd_list(args) -> int:
    for name in sorted(SCENARIOS):
        print(f"{name:<26} {SCENARIOS[name].description}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except MissingTableEntry as exc:
        print(f"missing table entry: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, UnknownScenario, AlgebraError, DegreeBoundExceeded, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
