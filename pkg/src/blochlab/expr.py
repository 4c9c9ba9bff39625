"""Scalar holomorphic expressions: parsing, evaluation, symbolic gradients.

Grammar (whitespace is ignored)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' int)?
    base   := number | 'i' | 'z'digits | fn '(' expr ')' | '(' expr ')' | '-' base
    fn     := exp | log | sqrt

Variables are 1-based (``z1``, ``z2``, ...).  Exponents are integer constants,
optionally signed.  ``log`` and ``sqrt`` use principal branches.
"""

from __future__ import annotations

import cmath
import re
import warnings
from dataclasses import dataclass
from typing import Union

from .errors import ExprDomainError, SingularityError, ValidationError

SINGULAR_TOL = 1e-14
BRANCH_TOL = 1e-12
FUNCTIONS = ("exp", "log", "sqrt")


class BranchCutWarning(RuntimeWarning):
    """A principal-branch function was evaluated on its branch cut."""


class ExprSyntaxError(ValidationError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Func:
    name: str
    arg: "Expr"


Expr = Union[Const, Var, Neg, BinOp, Pow, Func]

I = Const(1j)
ZERO = Const(0.0)
ONE = Const(1.0)


# ----------------------------------------------------------------------------
# Parsing
# ----------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<var>z\d+)|(?P<name>[A-Za-z]+)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            pos += len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, dimension):
        self.tokens = _tokenize(text)
        self.i = 0
        self.dimension = dimension

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ExprSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def expr(self):
        node = self.term()
        while self.tok[1] in ("+", "-"):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok[1] in ("*", "/"):
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        node = self.base()
        if self.tok[1] == "^":
            self.take()
            sign = 1
            if self.tok[1] in ("-", "+"):
                sign = -1 if self.take()[1] == "-" else 1
            kind, val, pos = self.take()
            if kind != "num" or not val.isdigit():
                raise ExprSyntaxError("exponent must be an integer constant", pos)
            node = Pow(node, sign * int(val))
        return node

    def base(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Const(complex(float(val)))
        if kind == "var":
            idx = int(val[1:])
            if not 1 <= idx <= self.dimension:
                raise ValidationError(f"variable {val} out of range for dimension {self.dimension} (position {pos})")
            return Var(idx)
        if kind == "name":
            if val == "i":
                return I
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(val, arg)
            raise ExprSyntaxError(f"unknown name {val!r}", pos)
        if val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if val == "-":
            return Neg(self.base())
        raise ExprSyntaxError(f"unexpected {val or 'end of input'!r}", pos)


def parse(text: str, dimension: int) -> Expr:
    """Parse ``text`` into an expression tree in ``dimension`` variables."""
    p = _Parser(text, dimension)
    node = p.expr()
    kind, val, pos = p.tok
    if kind != "end":
        raise ExprSyntaxError(f"unexpected {val!r}", pos)
    return node


# ----------------------------------------------------------------------------
# Printing
# ----------------------------------------------------------------------------


def _fmt_real(x: float) -> str:
    return repr(float(x))


def to_text(node: Expr) -> str:
    """Render ``node`` so that parsing the text gives back the same tree."""
    if isinstance(node, Const):
        v = complex(node.value)
        if v == 1j:
            return "i"
        if v.imag == 0 and v.real >= 0:
            return _fmt_real(v.real)
        # folded constants; these print as expressions rather than literals
        re_part = _fmt_real(abs(v.real))
        im_part = _fmt_real(abs(v.imag))
        s = f"({'-' if v.real < 0 else ''}{re_part}{'-' if v.imag < 0 else '+'}{im_part}*i)"
        return s
    if isinstance(node, Var):
        return f"z{node.index}"
    if isinstance(node, Neg):
        return f"-({to_text(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    if isinstance(node, Pow):
        return f"({to_text(node.base)})^{node.exponent}"
    if isinstance(node, Func):
        return f"{node.name}({to_text(node.arg)})"
    raise TypeError(node)


# ----------------------------------------------------------------------------
# Evaluation
# ----------------------------------------------------------------------------


def _check_divisor(d):
    if abs(d) < SINGULAR_TOL:
        raise SingularityError(f"division by a value of modulus {abs(d):.3g}")


def evaluate(node: Expr, z) -> complex:
    """Principal-branch value of ``node`` at the point ``z`` (a sequence of complex numbers)."""
    if isinstance(node, Const):
        return complex(node.value)
    if isinstance(node, Var):
        return complex(z[node.index - 1])
    if isinstance(node, Neg):
        return -evaluate(node.arg, z)
    if isinstance(node, BinOp):
        a = evaluate(node.left, z)
        b = evaluate(node.right, z)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        _check_divisor(b)
        return a / b
    if isinstance(node, Pow):
        b = evaluate(node.base, z)
        if node.exponent < 0:
            _check_divisor(b)
            return (1.0 / b) ** (-node.exponent)
        return b**node.exponent
    if isinstance(node, Func):
        a = evaluate(node.arg, z)
        if node.name == "exp":
            return cmath.exp(a)
        if node.name in ("log", "sqrt"):
            if node.name == "log" and a == 0:
                raise ExprDomainError("log(0)")
            if a.real < 0 and abs(a.imag) < BRANCH_TOL:
                warnings.warn(f"{node.name} evaluated on its branch cut at {a}", BranchCutWarning, stacklevel=2)
            return cmath.log(a) if node.name == "log" else cmath.sqrt(a)
    raise TypeError(node)


# ----------------------------------------------------------------------------
# Differentiation
# ----------------------------------------------------------------------------


def _is_const(node, value=None):
    return isinstance(node, Const) and (value is None or node.value == value)


def add(a, b):
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    return BinOp("+", a, b)


def sub(a, b):
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return neg(b)
    return BinOp("-", a, b)


def mul(a, b):
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    return BinOp("*", a, b)


def div(a, b):
    if _is_const(a, 0):
        return ZERO
    if _is_const(b, 1):
        return a
    return BinOp("/", a, b)


def neg(a):
    if _is_const(a):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def power(a, k):
    if k == 0:
        return ONE
    if k == 1:
        return a
    return Pow(a, k)


def derivative(node: Expr, index: int) -> Expr:
    """Symbolic partial derivative with respect to ``z<index>`` (1-based)."""
    if isinstance(node, Const):
        return ZERO
    if isinstance(node, Var):
        return ONE if node.index == index else ZERO
    if isinstance(node, Neg):
        return neg(derivative(node.arg, index))
    if isinstance(node, BinOp):
        a, b = node.left, node.right
        da, db = derivative(a, index), derivative(b, index)
        if node.op == "+":
            return add(da, db)
        if node.op == "-":
            return sub(da, db)
        if node.op == "*":
            return add(mul(da, b), mul(a, db))
        # (a/b)' = a'/b - a b'/b^2
        return sub(div(da, b), div(mul(a, db), power(b, 2)))
    if isinstance(node, Pow):
        du = derivative(node.base, index)
        k = node.exponent
        return mul(mul(Const(complex(k)), power(node.base, k - 1)), du)
    if isinstance(node, Func):
        du = derivative(node.arg, index)
        if node.name == "exp":
            return mul(node, du)
        if node.name == "log":
            return div(du, node.arg)
        return div(du, mul(Const(2.0), node))
    raise TypeError(node)


def gradient(node: Expr, dimension: int) -> list:
    return [derivative(node, j) for j in range(1, dimension + 1)]


def variables(node: Expr) -> set:
    if isinstance(node, Var):
        return {node.index}
    if isinstance(node, Const):
        return set()
    if isinstance(node, (Neg,)):
        return variables(node.arg)
    if isinstance(node, Func):
        return variables(node.arg)
    if isinstance(node, Pow):
        return variables(node.base)
    return variables(node.left) | variables(node.right)
