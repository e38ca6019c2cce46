"""Expression front end for operators, field elements and bivariate polynomials.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT | NAME | "(" expr ")"

Operator names are ``x``, ``D`` (d/dx) and ``del`` (x*D); ``w`` is the
generator of an extension field.  Division is only allowed by constants, so
``3/2`` is a rational literal while ``1/x`` is rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .diffop import DiffOp
from .errors import ParseError
from .exactalg import FieldDesc, FieldElem

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*|∂|δ)|(\*\*|[-+*/^()]))")

ALIASES = {"∂": "D", "δ": "del", "d": "D", "delta": "del"}


@dataclass(frozen=True)
class Node:
    """Syntax tree node; ``kind`` is one of num, var, neg, add, sub, mul, div, pow."""

    kind: str
    args: tuple
    pos: int


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            bad = pos + len(src[pos:]) - len(src[pos:].lstrip())
            raise ParseError(f"unexpected character {src[bad]!r}", bad, src)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, pos: int):
        raise ParseError(msg, pos, self.src)

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            _, op, pos = self.take()
            node = Node("add" if op == "+" else "sub", (node, self.term()), pos)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            _, op, pos = self.take()
            node = Node("mul" if op == "*" else "div", (node, self.unary()), pos)
        return node

    def unary(self) -> Node:
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return inner if val == "+" else Node("neg", (inner,), pos)
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            _, _, pos = self.take()
            kind, val, epos = self.peek()
            if kind == "op" and val == "-":
                self.error("negative exponent", epos)
            if kind != "int":
                self.error("exponent must be a nonnegative integer literal", epos)
            self.take()
            if self.peek()[:2] == ("op", "^"):
                self.error("chained exponents need parentheses", self.peek()[2])
            return Node("pow", (base, int(val)), pos)
        return base

    def atom(self) -> Node:
        kind, val, pos = self.take()
        if kind == "int":
            return Node("num", (int(val),), pos)
        if kind == "name":
            return Node("var", (ALIASES.get(val, val),), pos)
        if kind == "op" and val == "(":
            node = self.expr()
            k2, v2, p2 = self.take()
            if (k2, v2) != ("op", ")"):
                self.error("expected ')'", p2)
            return node
        if kind == "end":
            self.error("unexpected end of input", pos)
        self.error(f"unexpected {val!r}", pos)


def parse_tree(src: str) -> Node:
    p = _Parser(src)
    node = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        p.error(f"unexpected {val!r}", pos)
    return node


# -- evaluation --------------------------------------------------------------

class _Algebra:
    """Evaluation target; subclasses provide constants, variables and division."""

    names: tuple[str, ...] = ()

    def __init__(self, desc: FieldDesc, src: str):
        self.desc = desc
        self.src = src

    def fail(self, msg: str, pos: int):
        raise ParseError(msg, pos, self.src)

    def evaluate(self, node: Node):
        k, a = node.kind, node.args
        if k == "num":
            return self.const(a[0], node.pos)
        if k == "var":
            return self.var(a[0], node.pos)
        if k == "neg":
            return -self.evaluate(a[0])
        if k == "add":
            return self.evaluate(a[0]) + self.evaluate(a[1])
        if k == "sub":
            return self.evaluate(a[0]) - self.evaluate(a[1])
        if k == "mul":
            return self.evaluate(a[0]) * self.evaluate(a[1])
        if k == "div":
            num = self.evaluate(a[0])
            den = self.scalar_of(self.evaluate(a[1]))
            if den is None:
                self.fail("division is only allowed by a nonzero constant", node.pos)
            if den.is_zero():
                self.fail("division by zero", node.pos)
            return num * den.inverse()
        if k == "pow":
            return self.power(self.evaluate(a[0]), a[1])
        raise ValueError(k)

    def var(self, name: str, pos: int):
        if name == "w" and self.desc.ext_degree > 1:
            return self.lift(self.desc.gen)
        allowed = ", ".join(self.names + (("w",) if self.desc.ext_degree > 1 else ()))
        self.fail(f"unknown symbol {name!r} (expected one of {allowed})", pos)

    def power(self, base, e: int):
        result = self.lift(self.desc.one)
        for _ in range(e):
            result = result * base
        return result


class _OperatorAlgebra(_Algebra):
    names = ("x", "D", "del")

    def const(self, n: int, pos: int) -> DiffOp:
        return DiffOp.constant(self.desc, n)

    def lift(self, c: FieldElem) -> DiffOp:
        return DiffOp.constant(self.desc, c)

    def var(self, name: str, pos: int):
        if name == "x":
            return DiffOp.x(self.desc)
        if name == "D":
            return DiffOp.d(self.desc)
        if name == "del":
            return DiffOp.delta(self.desc)
        return super().var(name, pos)

    def scalar_of(self, op: DiffOp) -> FieldElem | None:
        if op.is_zero():
            return self.desc.zero
        if set(k for k, _ in op.items()) == {(0, 0)}:
            return op.coeff(0, 0)
        return None


class _FieldAlgebra(_Algebra):
    names = ()

    def const(self, n: int, pos: int) -> FieldElem:
        return self.desc(n)

    def lift(self, c: FieldElem) -> FieldElem:
        return c

    def scalar_of(self, c: FieldElem) -> FieldElem:
        return c


class BivariatePoly(dict):
    """Polynomial in x and y as {(x-power, y-power): coefficient}."""

    def __init__(self, desc: FieldDesc, terms=None):
        super().__init__()
        self.desc = desc
        for key, c in (terms or {}).items():
            c = desc(c)
            if not c.is_zero():
                self[key] = c

    def __add__(self, other):
        out = dict(self)
        for key, c in other.items():
            out[key] = out[key] + c if key in out else c
        return BivariatePoly(self.desc, out)

    def __neg__(self):
        return BivariatePoly(self.desc, {k: -c for k, c in self.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out: dict = {}
        for (a, b), c in self.items():
            for (e, f), d in other.items():
                key = (a + e, b + f)
                out[key] = out[key] + c * d if key in out else c * d
        return BivariatePoly(self.desc, out)


class _BivariateAlgebra(_Algebra):
    names = ("x", "y")

    def const(self, n: int, pos: int):
        return BivariatePoly(self.desc, {(0, 0): n})

    def lift(self, c: FieldElem):
        return BivariatePoly(self.desc, {(0, 0): c})

    def var(self, name: str, pos: int):
        if name == "x":
            return BivariatePoly(self.desc, {(1, 0): 1})
        if name == "y":
            return BivariatePoly(self.desc, {(0, 1): 1})
        return super().var(name, pos)

    def scalar_of(self, q: BivariatePoly):
        if not q:
            return self.desc.zero
        if set(q) == {(0, 0)}:
            return q[(0, 0)]
        return None


def parse(src: str, desc: FieldDesc) -> DiffOp:
    """Parse an operator expression, expanding products with D x = x D + 1."""
    return _OperatorAlgebra(desc, src).evaluate(parse_tree(src))


def parse_field_element(src: str, desc: FieldDesc) -> FieldElem:
    """Parse a constant such as ``-3/2`` or ``2*w + 1``."""
    return _FieldAlgebra(desc, src).evaluate(parse_tree(src))


def parse_bivariate(src: str, desc: FieldDesc) -> BivariatePoly:
    """Parse a polynomial in x and y."""
    return _BivariateAlgebra(desc, src).evaluate(parse_tree(src))


def parse_rational(src: str) -> Fraction:
    return parse_field_element(src, FieldDesc()).to_fraction()
