"""Text and JSON forms of field elements.

The grammar is ordinary integer arithmetic with ``+ - * / **``, parentheses
and the symbol ``w`` for the distinguished root of unity (``-1`` when l=2).
"""
from __future__ import annotations

import ast

from .arith import CycElem, CycInt, zeta
from .errors import CycNormError, PreconditionError


class ParseError(CycNormError, ValueError):
    """Malformed element expression."""


def _eval(node, ell: int) -> CycElem:
    if isinstance(node, ast.Expression):
        return _eval(node.body, ell)
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return CycElem.of(node.value, ell)
    if isinstance(node, ast.Name) and node.id == "w":
        return zeta(ell)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, ell)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        left = _eval(node.left, ell)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and type(node.right.value) is int):
                raise ParseError("exponents must be integer literals")
            if abs(node.right.value) > 10_000:
                raise ParseError("exponent too large")
            if node.right.value < 0 and not left:
                raise ParseError("division by zero")
            return left ** node.right.value
        right = _eval(node.right, ell)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right:
                raise ParseError("division by zero")
            return left / right
    raise ParseError(f"unsupported syntax: {ast.dump(node)[:60]}")


def parse_elem(text: str, ell: int) -> CycElem:
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    return _eval(tree, ell)


def format_elem(x: CycElem) -> str:
    return str(x)


def elem_to_json(x: CycElem) -> dict:
    num, den = x.num_den()
    return {"num": list(num.coords), "den": list(den.coords), "ell": x.ell}


def elem_from_json(obj) -> CycElem:
    if isinstance(obj, str):
        raise PreconditionError("element JSON must be an object; use parse_elem for text")
    ell = obj["ell"]
    num = CycInt(tuple(obj["num"]), ell)
    den = CycInt(tuple(obj["den"]), ell)
    if not den:
        raise PreconditionError("zero denominator")
    return CycElem.of(num, ell) / CycElem.of(den, ell)
