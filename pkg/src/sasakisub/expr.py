"""Coordinate expressions and order-2 jets.

Expressions are rational functions of the chart coordinates built from
constants, variables, ``+ - * /``, unary minus and integer powers (``^``).
:func:`evaluate_jet` returns the value, gradient and Hessian at a point,
propagated exactly through the arithmetic rules in one forward pass.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np


class ExpressionError(ValueError):
    """Raised for malformed expression text or undeclared variables."""

    def __init__(self, message: str, text: str = "", offset: int | None = None):
        self.text = text
        self.offset = offset
        if offset is not None:
            message = f"{message} at offset {offset} in {text!r}"
        super().__init__(message)


class EvaluationError(ZeroDivisionError):
    """Raised when an expression divides by zero at the evaluation point."""


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    index: int
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Add:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Sub:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Mul:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Div:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Const, Var, Neg, Add, Sub, Mul, Div, Pow]

ZERO = Const(0.0)
ONE = Const(1.0)


@dataclass(frozen=True)
class Jet2:
    """Value, gradient and Hessian of a scalar function at a point."""

    value: float
    gradient: np.ndarray
    hessian: np.ndarray


@dataclass(frozen=True)
class Expression:
    """A parsed scalar expression over an ordered list of chart variables."""

    root: Node
    variables: tuple[str, ...]
    text: str = field(default="", compare=False)

    @property
    def dim(self) -> int:
        return len(self.variables)

    def free_variables(self) -> set[str]:
        return {self.variables[i] for i in _free_indices(self.root)}

    def is_constant(self) -> bool:
        return not _free_indices(self.root)

    def __call__(self, point: Sequence[float]) -> float:
        return evaluate(self, point)

    def __str__(self) -> str:
        return self.text or to_text(self.root)


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ExpressionError("unexpected character", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, chart_vars: Sequence[str]):
        self.text = text
        self.index = {name: i for i, name in enumerate(chart_vars)}
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok=None) -> ExpressionError:
        tok = tok or self.peek()
        return ExpressionError(message, self.text, tok[2])

    def expect(self, op: str) -> None:
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise self.error(f"expected {op!r}", tok)

    def parse(self) -> Node:
        node = self.sum()
        if self.peek()[0] != "end":
            raise self.error("unexpected token")
        return node

    def sum(self) -> Node:
        node = self.product()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.product()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def product(self) -> Node:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self) -> Node:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return Neg(self.unary())
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            exponent = self.integer_exponent()
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                raise self.error("chained powers need parentheses")
            return Pow(base, exponent)
        return base

    def integer_exponent(self) -> int:
        paren = False
        if self.peek()[0] == "op" and self.peek()[1] == "(":
            self.take()
            paren = True
        sign = 1
        if self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
        tok = self.take()
        if tok[0] != "num" or not tok[1].isdigit():
            raise self.error("exponent must be an integer literal", tok)
        if paren:
            self.expect(")")
        return sign * int(tok[1])

    def atom(self) -> Node:
        tok = self.take()
        kind, value, _ = tok
        if kind == "num":
            return Const(float(value))
        if kind == "name":
            if value not in self.index:
                raise ExpressionError(
                    f"undeclared variable {value!r}", self.text, tok[2]
                )
            return Var(self.index[value], value)
        if kind == "op" and value == "(":
            node = self.sum()
            self.expect(")")
            return node
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {value!r}", tok)


def parse_expression(text: str, chart_vars: Sequence[str]) -> Expression:
    """Parse ``text`` into an :class:`Expression` over ``chart_vars``.

    Raises :class:`ExpressionError` with the character offset on a syntax
    error, or naming the variable when it is not declared in the chart.
    """
    if not text or not text.strip():
        raise ExpressionError("empty expression", text, 0)
    root = _Parser(text, chart_vars).parse()
    return Expression(root, tuple(chart_vars), text.strip())


def constant(value: float, chart_vars: Sequence[str]) -> Expression:
    return Expression(Const(float(value)), tuple(chart_vars), repr(float(value)))


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------


def _free_indices(node: Node) -> set[int]:
    if isinstance(node, Var):
        return {node.index}
    if isinstance(node, Const):
        return set()
    if isinstance(node, Neg):
        return _free_indices(node.arg)
    if isinstance(node, Pow):
        return _free_indices(node.base)
    return _free_indices(node.left) | _free_indices(node.right)


def _value(node: Node, x: Sequence[float]) -> float:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return float(x[node.index])
    if isinstance(node, Neg):
        return -_value(node.arg, x)
    if isinstance(node, Add):
        return _value(node.left, x) + _value(node.right, x)
    if isinstance(node, Sub):
        return _value(node.left, x) - _value(node.right, x)
    if isinstance(node, Mul):
        return _value(node.left, x) * _value(node.right, x)
    if isinstance(node, Div):
        den = _value(node.right, x)
        if den == 0.0:
            raise EvaluationError(f"division by zero in {to_text(node)!r}")
        return _value(node.left, x) / den
    base = _value(node.base, x)
    if node.exponent < 0 and base == 0.0:
        raise EvaluationError(f"division by zero in {to_text(node)!r}")
    return base**node.exponent


def evaluate(e: Expression, point: Sequence[float]) -> float:
    """Plain value of ``e`` at ``point``."""
    return _value(e.root, point)


def _jet(node: Node, x: np.ndarray):
    n = x.shape[0]
    if isinstance(node, Const):
        return node.value, np.zeros(n), np.zeros((n, n))
    if isinstance(node, Var):
        g = np.zeros(n)
        g[node.index] = 1.0
        return float(x[node.index]), g, np.zeros((n, n))
    if isinstance(node, Neg):
        v, g, h = _jet(node.arg, x)
        return -v, -g, -h
    if isinstance(node, (Add, Sub)):
        va, ga, ha = _jet(node.left, x)
        vb, gb, hb = _jet(node.right, x)
        if isinstance(node, Add):
            return va + vb, ga + gb, ha + hb
        return va - vb, ga - gb, ha - hb
    if isinstance(node, Mul):
        va, ga, ha = _jet(node.left, x)
        vb, gb, hb = _jet(node.right, x)
        cross = np.outer(ga, gb)
        return va * vb, va * gb + vb * ga, va * hb + vb * ha + cross + cross.T
    if isinstance(node, Div):
        va, ga, ha = _jet(node.left, x)
        vb, gb, hb = _jet(node.right, x)
        if vb == 0.0:
            raise EvaluationError(f"division by zero in {to_text(node)!r}")
        # reciprocal jet, then product rule
        r = 1.0 / vb
        gr = -gb * r * r
        hr = -hb * r * r + 2.0 * np.outer(gb, gb) * r * r * r
        cross = np.outer(ga, gr)
        return va * r, va * gr + r * ga, va * hr + r * ha + cross + cross.T
    # Pow
    k = node.exponent
    v, g, h = _jet(node.base, x)
    if k == 0:
        return 1.0, np.zeros(n), np.zeros((n, n))
    if k == 1:
        return v, g, h
    if v == 0.0 and k < 0:
        raise EvaluationError(f"division by zero in {to_text(node)!r}")
    d1 = k * v ** (k - 1)
    d2 = k * (k - 1) * v ** (k - 2)
    return v**k, d1 * g, d1 * h + d2 * np.outer(g, g)


def evaluate_jet(e: Expression, point: Sequence[float]) -> Jet2:
    """Value, gradient and Hessian of ``e`` at ``point``.

    The Hessian is assembled from symmetric outer-product terms, so it is
    exactly symmetric.
    """
    x = np.asarray(point, dtype=float)
    if x.shape != (e.dim,):
        raise ValueError(f"point has {x.size} coordinates, chart has {e.dim}")
    v, g, h = _jet(e.root, x)
    return Jet2(float(v), g, h)


# --------------------------------------------------------------------------
# Symbolic derivative (used for third derivatives of map components)
# --------------------------------------------------------------------------


def _is_zero(node: Node) -> bool:
    return isinstance(node, Const) and node.value == 0.0


def _is_one(node: Node) -> bool:
    return isinstance(node, Const) and node.value == 1.0


def _add(a: Node, b: Node) -> Node:
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    return Add(a, b)


def _sub(a: Node, b: Node) -> Node:
    if _is_zero(b):
        return a
    if _is_zero(a):
        return Neg(b)
    return Sub(a, b)


def _mul(a: Node, b: Node) -> Node:
    if _is_zero(a) or _is_zero(b):
        return ZERO
    if _is_one(a):
        return b
    if _is_one(b):
        return a
    return Mul(a, b)


def _diff(node: Node, i: int) -> Node:
    if isinstance(node, Const):
        return ZERO
    if isinstance(node, Var):
        return ONE if node.index == i else ZERO
    if isinstance(node, Neg):
        d = _diff(node.arg, i)
        return ZERO if _is_zero(d) else Neg(d)
    if isinstance(node, Add):
        return _add(_diff(node.left, i), _diff(node.right, i))
    if isinstance(node, Sub):
        return _sub(_diff(node.left, i), _diff(node.right, i))
    if isinstance(node, Mul):
        return _add(
            _mul(_diff(node.left, i), node.right), _mul(node.left, _diff(node.right, i))
        )
    if isinstance(node, Div):
        da, db = _diff(node.left, i), _diff(node.right, i)
        num = _sub(_mul(da, node.right), _mul(node.left, db))
        if _is_zero(num):
            return ZERO
        return Div(num, Pow(node.right, 2))
    k = node.exponent
    db = _diff(node.base, i)
    if k == 0 or _is_zero(db):
        return ZERO
    outer = ONE if k == 1 else (node.base if k == 2 else Pow(node.base, k - 1))
    return _mul(_mul(Const(float(k)), outer), db)


def derivative(e: Expression, var: int | str) -> Expression:
    """Partial derivative of ``e`` as a new expression (zeros pruned)."""
    i = e.variables.index(var) if isinstance(var, str) else var
    root = _diff(e.root, i)
    return Expression(root, e.variables, to_text(root))


_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def to_text(node: Node) -> str:
    """Render ``node`` back to parseable text."""

    def wrap(child: Node, parent_prec: int, right: bool = False) -> str:
        s = to_text(child)
        p = _PREC.get(type(child), 5)
        if p < parent_prec or (right and p == parent_prec and p < 3):
            return f"({s})"
        return s

    if isinstance(node, Const):
        v = node.value
        s = repr(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)
        return f"({s})" if v < 0 else s
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return "-" + wrap(node.arg, 3)
    if isinstance(node, Pow):
        return f"{wrap(node.base, 5)}^{node.exponent}" if node.exponent >= 0 else (
            f"{wrap(node.base, 5)}^({node.exponent})"
        )
    ops = {Add: "+", Sub: "-", Mul: "*", Div: "/"}
    prec = _PREC[type(node)]
    return f"{wrap(node.left, prec)} {ops[type(node)]} {wrap(node.right, prec, True)}"
