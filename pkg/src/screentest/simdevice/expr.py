"""Guards and value expressions used by app definitions.

JSON syntax: a scalar is a literal; ``{"state": name}`` reads an app state
variable; ``{"reg": element_id}`` reads the text typed into an element;
every other single-key object ``{op: args}`` applies an operator.

Definitions are type-checked when loaded so that evaluation is total on any
state reachable at runtime.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Mapping

EMAIL_RE = re.compile(r"^[^@\s]+@[^@\s.]+(\.[^@\s.]+)+$")


class ExprError(ValueError):
    def __init__(self, message: str, path: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class Expr:
    op: str
    args: tuple

    def __repr__(self) -> str:
        return f"{self.op}{self.args!r}"


TRUE = Expr("lit", (True,))

_INT_OPS = {"add", "sub", "mod"}
_CMP_OPS = {"lt", "le", "gt", "ge"}
_STR_PREDICATES = {"empty", "nonempty", "email"}
_BOOL_OPS = {"all", "any", "not"}
_EQ_OPS = {"eq", "ne"}
OPERATORS = _INT_OPS | _CMP_OPS | _STR_PREDICATES | _BOOL_OPS | _EQ_OPS | {"concat"}


def parse_expr(raw: Any, path: str) -> Expr:
    if isinstance(raw, (bool, int, str)):
        return Expr("lit", (raw,))
    if isinstance(raw, dict) and len(raw) == 1:
        (op, arg), = raw.items()
        if op in ("state", "reg"):
            if not isinstance(arg, str):
                raise ExprError(f"{op} reference must be a string", path)
            return Expr(op, (arg,))
        if op not in OPERATORS:
            raise ExprError(f"unknown operator {op!r}", path)
        items = arg if isinstance(arg, list) else [arg]
        return Expr(op, tuple(parse_expr(a, f"{path}.{op}[{i}]") for i, a in enumerate(items)))
    raise ExprError(f"cannot parse expression {raw!r}", path)


def expr_to_json(e: Expr) -> Any:
    if e.op == "lit":
        return e.args[0]
    if e.op in ("state", "reg"):
        return {e.op: e.args[0]}
    return {e.op: [expr_to_json(a) for a in e.args]}


def _arity(e: Expr, n: int, path: str) -> None:
    if len(e.args) != n:
        raise ExprError(f"{e.op} takes {n} argument(s), got {len(e.args)}", path)


def check_types(e: Expr, state_types: Mapping[str, type], registers: set[str], path: str) -> type:
    """Static type of ``e``; raises ExprError on any ill-typed or dangling reference."""
    if e.op == "lit":
        return type(e.args[0])
    if e.op == "state":
        if e.args[0] not in state_types:
            raise ExprError(f"unknown state variable {e.args[0]!r}", path)
        return state_types[e.args[0]]
    if e.op == "reg":
        if e.args[0] not in registers:
            raise ExprError(f"{e.args[0]!r} is not an editable element of this screen", path)
        return str
    arg_types = [check_types(a, state_types, registers, f"{path}.{e.op}[{i}]") for i, a in enumerate(e.args)]
    if e.op in _INT_OPS or e.op in _CMP_OPS:
        _arity(e, 2, path)
        if arg_types != [int, int]:
            raise ExprError(f"{e.op} needs two integers", path)
        if e.op == "mod" and not (e.args[1].op == "lit" and e.args[1].args[0] > 0):
            raise ExprError("mod divisor must be a positive literal", path)
        return bool if e.op in _CMP_OPS else int
    if e.op in _EQ_OPS:
        _arity(e, 2, path)
        if arg_types[0] is not arg_types[1]:
            raise ExprError(f"{e.op} compares {arg_types[0].__name__} with {arg_types[1].__name__}", path)
        return bool
    if e.op in _STR_PREDICATES:
        _arity(e, 1, path)
        if arg_types != [str]:
            raise ExprError(f"{e.op} needs a string", path)
        return bool
    if e.op == "concat":
        if not all(t is str for t in arg_types):
            raise ExprError("concat needs strings", path)
        return str
    if e.op == "not":
        _arity(e, 1, path)
    if not all(t is bool for t in arg_types):
        raise ExprError(f"{e.op} needs booleans", path)
    return bool


def evaluate(e: Expr, state: Mapping[str, Any], registers: Mapping[str, str]) -> Any:
    op, args = e.op, e.args
    if op == "lit":
        return args[0]
    if op == "state":
        return state[args[0]]
    if op == "reg":
        return registers.get(args[0], "")
    if op == "all":
        return all(evaluate(a, state, registers) for a in args)
    if op == "any":
        return any(evaluate(a, state, registers) for a in args)
    vals = [evaluate(a, state, registers) for a in args]
    if op == "not":
        return not vals[0]
    if op == "eq":
        return vals[0] == vals[1]
    if op == "ne":
        return vals[0] != vals[1]
    if op == "add":
        return vals[0] + vals[1]
    if op == "sub":
        return vals[0] - vals[1]
    if op == "mod":
        return vals[0] % vals[1]
    if op == "lt":
        return vals[0] < vals[1]
    if op == "le":
        return vals[0] <= vals[1]
    if op == "gt":
        return vals[0] > vals[1]
    if op == "ge":
        return vals[0] >= vals[1]
    if op == "empty":
        return vals[0] == ""
    if op == "nonempty":
        return vals[0] != ""
    if op == "email":
        return bool(EMAIL_RE.match(vals[0]))
    if op == "concat":
        return "".join(vals)
    raise AssertionError(f"unhandled operator {op}")
