"""JSON encoding of results.

Every value is a tagged object with a ``kind`` field.  Functions, operators
and conditions are stored in their printed form, which the parser reads
back, so JSON output can be fed to any command expecting that kind of value.
"""

import json

from .errors import ExprTypeError
from .evaluate import FundamentalSystem, evaluate
from .funcalg import Func
from .idop import IdOperator
from .problems import BoundaryProblem, CondSpace, FuncSpace


def to_json(value):
    """Tagged JSON-compatible dict for a library value."""
    if isinstance(value, bool):
        return {"kind": "boolean", "value": value}
    if isinstance(value, Func):
        return {"kind": "function", "text": str(value)}
    if isinstance(value, IdOperator):
        return {"kind": "operator", "text": str(value)}
    if isinstance(value, CondSpace):
        return {"kind": "conditions", "basis": [str(b) for b in value]}
    if isinstance(value, FuncSpace):
        return {"kind": "functions", "basis": [str(f) for f in value]}
    if isinstance(value, BoundaryProblem):
        return {
            "kind": "problem",
            "operator": str(value.T),
            "conditions": [str(b) for b in value.B],
            "exceptional": [str(e) for e in value.E],
            "fundsys": None if value.fundsys is None else [str(u) for u in value.fundsys],
        }
    if isinstance(value, (list, tuple)):
        return {"kind": "list", "items": [to_json(v) for v in value]}
    raise ExprTypeError(f"cannot serialize {type(value).__name__}")


def from_json(data):
    """Inverse of :func:`to_json`."""
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict) or "kind" not in data:
        raise ExprTypeError("JSON input must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "boolean":
            return bool(data["value"])
        if kind in ("function", "operator"):
            return evaluate(data["text"])
        if kind == "conditions":
            return evaluate("BC(" + ", ".join(data["basis"]) + ")")
        if kind == "functions":
            return evaluate("ES(" + ", ".join(data["basis"]) + ")")
        if kind == "problem":
            T = evaluate(data["operator"])
            B = evaluate("BC(" + ", ".join(data["conditions"]) + ")")
            E = evaluate("ES(" + ", ".join(data.get("exceptional", [])) + ")")
            fs = data.get("fundsys")
            if fs is not None:
                fs = FundamentalSystem(evaluate("FS(" + ", ".join(fs) + ")"))
            if not isinstance(T, IdOperator):
                raise ExprTypeError("problem operator must be a differential operator")
            return BoundaryProblem(T, B, E, fs)
        if kind == "list":
            return [from_json(v) for v in data["items"]]
    except KeyError as exc:
        raise ExprTypeError(f"JSON object of kind {kind!r} lacks field {exc}") from None
    raise ExprTypeError(f"unknown JSON kind {kind!r}")


def dumps(value):
    return json.dumps(to_json(value), ensure_ascii=False)
