"""Text grammar for trig polynomials.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT | NAME | ('sin' | 'cos') '(' expr ')' | '(' expr ')'

Trig arguments must be integer combinations of angle variables; divisors
must be free of coordinates.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Mapping

from .params import PARAMS, ParamField
from .trig import ANGLES, CARTESIAN, TrigExpr

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    pass


def tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at position {pos}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind}, found {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            node = ("mul" if op == "*" else "div", node, self.unary())
        return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return ("neg", self.unary())
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            exp = int(self.take("num")[1])
            return ("pow", base, -exp if neg else exp)
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return ("num", Fraction(int(val)))
        if kind == "name":
            self.take()
            if val in ("sin", "cos"):
                self.take("op", "(")
                arg = self.expr()
                self.take("op", ")")
                return ("call", val, arg)
            if val not in CARTESIAN and val not in ANGLES and val not in PARAMS:
                raise ParseError(f"unknown symbol {val!r}")
            return ("var", val)
        if (kind, val) == ("op", "("):
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        raise ParseError(f"unexpected token {val!r}")


def parse_tree(text: str):
    """Parse text into a raw syntax tree (nested tuples)."""
    p = _Parser(tokenize(text))
    if not p.toks:
        raise ParseError("empty expression")
    node = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input at token {p.toks[p.i][1]!r}")
    return node


def _const_int(node):
    if node[0] == "num" and node[1].denominator == 1:
        return int(node[1])
    if node[0] == "neg":
        k = _const_int(node[1])
        return None if k is None else -k
    return None


def _linear_angles(node) -> dict[str, int]:
    tag = node[0]
    if tag == "var":
        if node[1] not in ANGLES:
            raise ParseError(f"trig argument uses non-angle symbol {node[1]!r}")
        return {node[1]: 1}
    if tag in ("add", "sub"):
        a, b = _linear_angles(node[1]), _linear_angles(node[2])
        sign = 1 if tag == "add" else -1
        for k, v in b.items():
            a[k] = a.get(k, 0) + sign * v
        return a
    if tag == "neg":
        return {k: -v for k, v in _linear_angles(node[1]).items()}
    if tag == "mul":
        for num, other in ((node[1], node[2]), (node[2], node[1])):
            k = _const_int(num)
            if k is not None:
                return {a: k * v for a, v in _linear_angles(other).items()}
        raise ParseError("trig arguments must be integer combinations of angles")
    raise ParseError("trig arguments must be integer combinations of angles")


def tree_to_expr(node) -> TrigExpr:
    tag = node[0]
    if tag == "num":
        return TrigExpr.const(node[1])
    if tag == "var":
        name = node[1]
        if name in ANGLES:
            raise ParseError(f"angle {name!r} may only appear inside sin/cos")
        return TrigExpr.var(name)
    if tag == "neg":
        return -tree_to_expr(node[1])
    if tag in ("add", "sub", "mul"):
        a, b = tree_to_expr(node[1]), tree_to_expr(node[2])
        return a + b if tag == "add" else a - b if tag == "sub" else a * b
    if tag == "div":
        a, b = tree_to_expr(node[1]), tree_to_expr(node[2])
        if not b.is_constant():
            raise ParseError("divisors must not depend on coordinates or angles")
        if b.constant_value().is_zero():
            raise ParseError("division by zero")
        return a / b
    if tag == "pow":
        base, n = tree_to_expr(node[1]), node[2]
        if n < 0:
            if not base.is_constant():
                raise ParseError("negative powers are only allowed for parameters")
            return TrigExpr.const(base.constant_value() ** n)
        return base**n
    if tag == "call":
        return TrigExpr.trig(node[1], _linear_angles(node[2]))
    raise ParseError(f"bad node {tag}")


def parse(text: str) -> TrigExpr:
    """Parse text into a canonical :class:`TrigExpr`."""
    return tree_to_expr(parse_tree(text))


def parse_param(text: str) -> ParamField:
    e = parse(text)
    if not e.is_constant():
        raise ParseError(f"{text!r} is not a parameter expression")
    return e.constant_value()


def eval_tree(node, point: Mapping[str, float]) -> float:
    """Float evaluation of a raw tree; used to cross-check canonicalisation."""
    tag = node[0]
    if tag == "num":
        return float(node[1])
    if tag == "var":
        return float(point[node[1]])
    if tag == "neg":
        return -eval_tree(node[1], point)
    if tag == "add":
        return eval_tree(node[1], point) + eval_tree(node[2], point)
    if tag == "sub":
        return eval_tree(node[1], point) - eval_tree(node[2], point)
    if tag == "mul":
        return eval_tree(node[1], point) * eval_tree(node[2], point)
    if tag == "div":
        return eval_tree(node[1], point) / eval_tree(node[2], point)
    if tag == "pow":
        return eval_tree(node[1], point) ** node[2]
    if tag == "call":
        fn = math.sin if node[1] == "sin" else math.cos
        return fn(eval_tree(node[2], point))
    raise ValueError(tag)
