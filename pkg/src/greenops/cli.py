"""Command-line interface.

Arguments are expressions in the operator language (``d``, ``a``, ``e(c)``,
``x``, ``exp(..)``, ``BP``, ``GBP``, ``BC``, ``ES``, ``FS``) or JSON produced by
``--format json``; ``-`` reads the argument from stdin.  Exit status is 0 on
success, 1 when a mathematical precondition fails and 2 on usage errors.
"""

import argparse
import json
import random
import sys

from . import algorithms, problems
from .errors import ExprTypeError, GreenOpsError, MathError, UsageError
from .evaluate import FundamentalSystem, as_function, as_operator, evaluate
from .funcalg import Func
from .idop import IdOperator
from .problems import BoundaryProblem, FuncSpace
from .sampling import random_problem
from .serialize import from_json, to_json


def _read(arg):
    text = sys.stdin.read() if arg == "-" else arg
    text = text.strip()
    if text.startswith("{"):
        try:
            return from_json(text)
        except json.JSONDecodeError as exc:
            raise ExprTypeError(f"invalid JSON input: {exc}") from None
    return evaluate(text)


def _problem(arg):
    v = _read(arg)
    if not isinstance(v, BoundaryProblem):
        raise ExprTypeError("expected a boundary problem BP(...) or GBP(...)")
    return v


def _operator(arg):
    return as_operator(_read(arg))


def _funcspace(arg):
    v = _read(arg)
    if isinstance(v, FuncSpace):
        return v
    if isinstance(v, (Func, IdOperator)):
        return FuncSpace([as_function(v)])
    raise ExprTypeError("expected a function space ES(...)")


def _funclist(arg):
    """Comma-separated functions, ``FS(...)``, ``ES(...)`` or a JSON list of functions."""
    if arg is None:
        return None
    text = arg.strip()
    if text.startswith("{"):
        v = from_json(text)
    elif text.startswith(("FS(", "ES(")):
        v = evaluate(text)
    else:
        v = evaluate(f"FS({text})")
    if isinstance(v, (FundamentalSystem, FuncSpace)):
        return tuple(v)
    raise ExprTypeError("expected a list of functions")


def cmd_green(args):
    return problems.greens_operator(_problem(args.problem))


def cmd_compat(args):
    return problems.compatibility_conditions(_problem(args.problem))


def cmd_compose(args):
    return algorithms.compose(_problem(args.p1), _problem(args.p2))


def cmd_check_rol(args):
    return algorithms.check_reverse_order_law(_problem(args.p1), _problem(args.p2))


def cmd_factor(args):
    p = _problem(args.problem)
    if (args.t1 is None) != (args.t2 is None):
        raise ExprTypeError("--t1 and --t2 must be given together")
    if args.t1 is None:
        if args.fundsys2 is not None:
            raise ExprTypeError("--fundsys2 requires --t1 and --t2")
        return algorithms.factor_chain(p, algorithms.first_order_factors(p.T))
    return list(
        algorithms.factor_right_regular(p, _operator(args.t1), _operator(args.t2), _funclist(args.fundsys2))
    )


def cmd_factor_left(args):
    p = _problem(args.problem)
    return list(
        algorithms.factor_left_regular(
            p,
            _operator(args.t1),
            _operator(args.t2),
            _funclist(args.fundsys1),
            _funclist(args.fundsys2),
            _funclist(args.pool),
        )
    )


def cmd_inverse_image(args):
    return algorithms.inverse_image(_operator(args.operator), _funcspace(args.space), _funclist(args.fundsys))


def cmd_is_regular(args):
    return problems.is_regular(_problem(args.problem))


def cmd_apply(args):
    return _operator(args.operator).apply(as_function(_read(args.function)))


def cmd_simplify(args):
    return _read(args.expr)


def cmd_random_problem(args):
    rng = random.Random(args.seed)
    p = random_problem(rng, max_order=args.max_order, max_extra=args.max_extra)
    if p is None:
        raise MathError("no regular problem found; try another seed")
    return p


def build_parser():
    parser = argparse.ArgumentParser(
        prog="greenops",
        description="Exact Green's operators and factorizations of linear boundary problems.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized helpers")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_, *positional):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        for arg, arg_help in positional:
            p.add_argument(arg, help=arg_help)
        p.set_defaults(func=func)
        return p

    add("green", cmd_green, "generalized Green's operator of a regular problem",
        ("problem", "BP(...) or GBP(...)"))
    add("compat", cmd_compat, "compatibility conditions of a semi-regular problem",
        ("problem", "BP(...) or GBP(...)"))
    add("compose", cmd_compose, "composite of two problems", ("p1", "left problem"), ("p2", "right problem"))
    add("check-rol", cmd_check_rol, "decide the reverse order law for G2.G1",
        ("p1", "left problem"), ("p2", "right problem"))
    p = add("factor", cmd_factor, "factor a regular problem with a regular right factor",
            ("problem", "regular BP(...) or GBP(...)"))
    p.add_argument("--t1", help="left operator factor")
    p.add_argument("--t2", help="right operator factor")
    p.add_argument("--fundsys2", help="fundamental system of T2, comma separated")
    p = add("factor-left", cmd_factor_left, "factor a semi-regular problem with a regular left factor",
            ("problem", "semi-regular BP(...)"))
    p.add_argument("--t1", required=True, help="left operator factor")
    p.add_argument("--t2", required=True, help="right operator factor")
    p.add_argument("--fundsys1", help="fundamental system of T1, comma separated")
    p.add_argument("--fundsys2", help="fundamental system of T2, comma separated")
    p.add_argument("--pool", help="candidate functions for the exceptional space, comma separated")
    p = add("inverse-image", cmd_inverse_image, "inverse image of a function space",
            ("operator", "differential operator"), ("space", "ES(...)"))
    p.add_argument("--fundsys", help="fundamental system of the operator, comma separated")
    add("is-regular", cmd_is_regular, "test regularity of a problem", ("problem", "BP(...) or GBP(...)"))
    add("apply", cmd_apply, "apply an operator to a function", ("operator", "operator"), ("function", "function"))
    add("simplify", cmd_simplify, "normal form of an expression", ("expr", "any expression"))
    p = add("random-problem", cmd_random_problem, "random regular constant-coefficient problem (uses --seed)")
    p.add_argument("--max-order", type=int, default=3)
    p.add_argument("--max-extra", type=int, default=2)
    return parser


def render(value, fmt):
    if fmt == "json":
        return json.dumps(to_json(value), ensure_ascii=False)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)) and not isinstance(value, FundamentalSystem):
        return "\n".join(render(v, fmt) for v in value)
    if isinstance(value, FundamentalSystem):
        return "FS(" + ", ".join(str(u) for u in value) + ")"
    return str(value)


def run_command(argv, stdout=None, stderr=None):
    """Run the CLI on ``argv``; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        value = args.func(args)
        print(render(value, args.format), file=stdout)
    except MathError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    except UsageError as exc:
        print(f"usage error: {type(exc).__name__}: {exc}", file=stderr)
        return 2
    except GreenOpsError as exc:  # pragma: no cover - every error is one of the two above
        print(f"error: {exc}", file=stderr)
        return 1
    return 0


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
