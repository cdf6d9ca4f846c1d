"""Expression language for the command line: parsing, printing, evaluation.

Grammar, loosest binding first::

    sum     := product (('+' | '-') product)*
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' exponent)*
    atom    := NUMBER | NAME | OPERATOR '(' sum ')' | '(' sum ')'

Exponents are integer literals, optionally negative or parenthesised.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import QSeries, Scalar
from .superfield import SuperField, D, d_phi, d_tau, d_z

__all__ = [
    "Expr",
    "Num",
    "Name",
    "Neg",
    "BinOp",
    "Pow",
    "Call",
    "ExprSyntaxError",
    "UnknownIdentifier",
    "IDENTIFIERS",
    "OPERATORS",
    "parse",
    "to_source",
    "evaluate",
]

IDENTIFIERS = ("x", "y", "z", "psi", "R", "DR", "Psi1", "Psi2", "E2", "E4", "E6",
               "theta", "phi", "phitilde", "lambda", "q")
OPERATORS = ("D", "Dt", "Dz", "Dtau", "Dphi")


class ExprSyntaxError(SyntaxError):
    def __init__(self, msg: str, line: int, column: int):
        super().__init__(f"{msg} (line {line}, column {column})")
        self.msg = msg
        self.line = self.lineno = line
        self.column = self.offset = column

    def __str__(self):
        return f"{self.msg} (line {self.line}, column {self.column})"


class UnknownIdentifier(NameError):
    def __init__(self, name: str, line: int, column: int):
        super().__init__(f"unknown identifier {name!r} (line {line}, column {column})")
        self.name = name
        self.line = line
        self.column = column


# syntax tree; positions are informational and excluded from equality


class Expr:
    pass


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction
    pos: tuple = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class Name(Expr):
    id: str
    pos: tuple = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr
    pos: tuple = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr
    pos: tuple = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: int
    pos: tuple = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr
    pos: tuple = field(default=(1, 1), compare=False, repr=False)


# tokenizer -------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    line, line_start, i = 1, 0, 0
    while i < len(src):
        m = _TOKEN.match(src, i)
        col = i - line_start + 1
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[i]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind != "ws":
            toks.append(_Tok(kind, m.group(), line, col))
        i = m.end()
    toks.append(_Tok("eof", "", line, len(src) - line_start + 1))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        return ExprSyntaxError(msg, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expect(self, text: str):
        if not self.at(text):
            found = repr(self.tok.text) if self.tok.kind != "eof" else "end of input"
            raise self.error(f"expected {text!r}, found {found}")
        return self.advance()

    def parse(self) -> Expr:
        e = self.sum()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def sum(self) -> Expr:
        e = self.product()
        while self.at("+") or self.at("-"):
            t = self.advance()
            e = BinOp(t.text, e, self.product(), (t.line, t.col))
        return e

    def product(self) -> Expr:
        e = self.unary()
        while self.at("*") or self.at("/"):
            t = self.advance()
            e = BinOp(t.text, e, self.unary(), (t.line, t.col))
        return e

    def unary(self) -> Expr:
        if self.at("-"):
            t = self.advance()
            return Neg(self.unary(), (t.line, t.col))
        return self.power()

    def power(self) -> Expr:
        e = self.atom()
        while self.at("^"):
            t = self.advance()
            e = Pow(e, self.exponent(), (t.line, t.col))
        return e

    def exponent(self) -> int:
        paren = self.at("(")
        if paren:
            self.advance()
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        t = self.tok
        if t.kind != "num":
            raise self.error("expected an integer exponent")
        self.advance()
        if paren:
            self.expect(")")
        return sign * int(t.text)

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(Fraction(t.text), (t.line, t.col))
        if t.kind == "name":
            self.advance()
            if t.text in OPERATORS:
                self.expect("(")
                arg = self.sum()
                self.expect(")")
                return Call(t.text, arg, (t.line, t.col))
            if t.text not in IDENTIFIERS:
                raise UnknownIdentifier(t.text, t.line, t.col)
            return Name(t.text, (t.line, t.col))
        if self.at("("):
            self.advance()
            e = self.sum()
            self.expect(")")
            return e
        found = repr(t.text) if t.kind != "eof" else "end of input"
        raise self.error(f"unexpected {found}")


def parse(src: str) -> Expr:
    return _Parser(src).parse()


# printing --------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_UNARY, _POW, _ATOM = 3, 4, 5


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _UNARY
    if isinstance(e, Pow):
        return _POW
    if isinstance(e, Num) and e.value.denominator != 1:
        return 2
    return _ATOM


def _wrap(e: Expr, parens: bool) -> str:
    s = to_source(e)
    return f"({s})" if parens else s


def to_source(e: Expr) -> str:
    """Source text with the fewest parentheses that parse back to ``e``."""
    if isinstance(e, Num):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Call):
        return f"{e.func}({to_source(e.arg)})"
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, _prec(e.operand) < _UNARY)
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _prec(e.base) <= _POW)}^{e.exp}"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        left = _wrap(e.left, _prec(e.left) < p)
        right = _wrap(e.right, _prec(e.right) <= p)
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an expression: {e!r}")


# evaluation ------------------------------------------------------------------


def _q(curve) -> SuperField:
    return SuperField.const(QSeries.q(curve.nq), curve.nz + 1, curve.nq)


_NAMES = {
    "x": lambda c: c.x,
    "y": lambda c: c.y,
    "z": lambda c: SuperField.monomial(1, 0, 1, c.nz + 1, c.nq),
    "psi": lambda c: c.psi,
    "R": lambda c: c.R,
    "DR": lambda c: c.D_power_R(1),
    "Psi1": lambda c: c.Psi1,
    "Psi2": lambda c: c.Psi2,
    "E2": lambda c: c.const(c.E2),
    "E4": lambda c: c.const(c.E4),
    "E6": lambda c: c.const(c.E6),
    "theta": lambda c: c.theta,
    "phi": lambda c: c.phi,
    "phitilde": lambda c: c.phitilde,
    "lambda": lambda c: c.const(Scalar.lam(1)),
    "q": _q,
}

_OPS = {
    "D": lambda c, f: D(f),
    "Dt": lambda c, f: c.Dt(f),
    "Dz": lambda c, f: d_z(f),
    "Dtau": lambda c, f: d_tau(f),
    "Dphi": lambda c, f: d_phi(f),
}


def evaluate(e: Expr | str, curve) -> SuperField:
    """Value of an expression as a truncated superfield on ``curve``.

    Division and negative powers invert the divisor, raising
    ``NonUnitLeading`` when its leading body coefficient is not a unit.
    """
    if isinstance(e, str):
        e = parse(e)
    if isinstance(e, Num):
        return curve.const(e.value)
    if isinstance(e, Name):
        return _NAMES[e.id](curve)
    if isinstance(e, Call):
        return _OPS[e.func](curve, evaluate(e.arg, curve))
    if isinstance(e, Neg):
        return -evaluate(e.operand, curve)
    if isinstance(e, Pow):
        return evaluate(e.base, curve) ** e.exp
    if isinstance(e, BinOp):
        a, b = evaluate(e.left, curve), evaluate(e.right, curve)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        return a / b
    raise TypeError(f"not an expression: {e!r}")
