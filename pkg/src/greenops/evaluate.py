"""Turn parsed expressions into functions, operators, spaces and problems."""

from fractions import Fraction

from .constants import ExpConstant
from .errors import ExprTypeError
from .funcalg import ExpPoly, Func, X
from .idop import IdOperator
from .parser import BinOp, Call, Deriv, Eval, Exp, Integral, Neg, Num, Var, parse
from .problems import BoundaryProblem, CondSpace, FuncSpace


class FundamentalSystem(tuple):
    """Value of an ``FS(...)`` constructor."""


def _is_op(v):
    return isinstance(v, IdOperator)


def _as_op(v):
    if isinstance(v, IdOperator):
        return v
    if isinstance(v, Func):
        return IdOperator.function(v)
    raise ExprTypeError(f"expected an operator or function, got {_describe(v)}")


def _as_func(v):
    if isinstance(v, Func):
        return v
    if isinstance(v, IdOperator) and v.is_function():
        return v.as_function()
    raise ExprTypeError(f"expected a function, got {_describe(v)}")


def _describe(v):
    if isinstance(v, Func):
        return f"function {v}"
    if isinstance(v, IdOperator):
        return f"operator {v}"
    if isinstance(v, CondSpace):
        return "condition space"
    if isinstance(v, FuncSpace):
        return "function space"
    if isinstance(v, BoundaryProblem):
        return "boundary problem"
    if isinstance(v, FundamentalSystem):
        return "fundamental system"
    return type(v).__name__


def _rational(v, what):
    f = _as_func(v)
    c = f.constant_value()
    if c is None or not c.is_rational():
        raise ExprTypeError(f"{what} must be a rational constant, got {f}")
    return c.to_fraction()


def _exp(arg):
    f = _as_func(arg)
    if not f.is_exppoly() or not set(k for k, _ in f.num.items()) <= {(0, 0), (0, 1)}:
        raise ExprTypeError(f"exp argument must be linear in x, got {f}")
    coeffs = dict(f.num.items())
    out = {}
    for key, what in (((0, 0), "constant part of exp argument"), ((0, 1), "frequency")):
        c = coeffs.get(key)
        if c is not None and not c.is_rational():
            raise ExprTypeError(f"{what} must be rational, got {c}")
        out[key] = c.to_fraction() if c is not None else Fraction(0)
    r, lam = out[(0, 0)], out[(0, 1)]
    return Func(ExpPoly({(lam, 0): ExpConstant.exp(r)}))


def _binop(op, a, b):
    if op == "^":
        n = b.value if isinstance(b, Num) else None
        if n is None:
            raise ExprTypeError("exponent must be a nonnegative integer")
        if isinstance(a, Func):
            return a ** n
        return _as_op(a) ** n
    if op in "+-":
        if isinstance(a, Func) and isinstance(b, Func):
            return a + b if op == "+" else a - b
        a, b = _as_op(a), _as_op(b)
        return a + b if op == "+" else a - b
    if op in ".*":
        if isinstance(a, Func) and isinstance(b, Func):
            return a * b
        return _as_op(a) * _as_op(b)
    if op == "/":
        b = _as_func(b)
        if isinstance(a, Func):
            return a / b
        c = b.constant_value()
        if c is None:
            raise ExprTypeError(f"an operator can only be divided by a constant, not {b}")
        return Func.const(1 / c) * _as_op(a)
    raise ExprTypeError(f"unknown operator {op!r}")


def _call(name, args):
    if name == "BC":
        conds = []
        for a in args:
            op = _as_op(a)
            if not op.is_stieltjes():
                raise ExprTypeError(f"{op} is not a Stieltjes boundary condition")
            conds.append(op)
        return CondSpace(conds)
    if name == "ES":
        return FuncSpace([_as_func(a) for a in args])
    if name == "FS":
        return FundamentalSystem(_as_func(a) for a in args)
    if name in ("BP", "GBP"):
        fundsys = None
        if args and isinstance(args[-1], FundamentalSystem):
            fundsys, args = args[-1], args[:-1]
        want = 2 if name == "BP" else 3
        if len(args) != want:
            raise ExprTypeError(f"{name} expects {want} arguments plus an optional FS(...)")
        T = _as_op(args[0])
        B = args[1]
        if not isinstance(B, CondSpace):
            raise ExprTypeError(f"second argument of {name} must be BC(...), got {_describe(B)}")
        E = args[2] if len(args) == 3 else FuncSpace()
        if not isinstance(E, FuncSpace):
            raise ExprTypeError(f"third argument of GBP must be ES(...), got {_describe(E)}")
        return BoundaryProblem(T, B, E, fundsys)
    raise ExprTypeError(f"unknown constructor {name}")


def eval_ast(node):
    """Evaluate an AST to a Func, IdOperator, CondSpace, FuncSpace, BoundaryProblem or FS tuple."""
    if isinstance(node, Num):
        return Func.const(node.value)
    if isinstance(node, Var):
        return X
    if isinstance(node, Deriv):
        return IdOperator.D()
    if isinstance(node, Integral):
        return IdOperator.A()
    if isinstance(node, Eval):
        return IdOperator.E(_rational(eval_ast(node.point), "evaluation point"))
    if isinstance(node, Exp):
        return _exp(eval_ast(node.arg))
    if isinstance(node, Neg):
        v = eval_ast(node.operand)
        if isinstance(v, (Func, IdOperator)):
            return -v
        raise ExprTypeError(f"cannot negate a {_describe(v)}")
    if isinstance(node, BinOp):
        left = eval_ast(node.left)
        right = node.right if node.op == "^" else eval_ast(node.right)
        for v in (left, right):
            if not isinstance(v, (Func, IdOperator, Num)):
                raise ExprTypeError(f"operator {node.op!r} cannot take a {_describe(v)}")
        return _binop(node.op, left, right)
    if isinstance(node, Call):
        return _call(node.name, [eval_ast(a) for a in node.args])
    raise ExprTypeError(f"unknown node {node!r}")


def evaluate(text):
    """Parse and evaluate ``text``."""
    return eval_ast(parse(text))


def as_operator(value):
    return _as_op(value)


def as_function(value):
    return _as_func(value)
