"""Concrete syntax: tokenizer, recursive-descent parser, printer, evaluator.

Grammar (whitespace insignificant)::

    expr  := term (("+" | "-") term)*
    term  := unary ("*" unary)*
    unary := "-" unary | power
    power := atom ("^" INT)?
    atom  := RATIONAL | NAME | "d[" labels "]" NAME | "D[" labels "]" NAME
           | "d" INT "(" expr ")" | "hatd" INT "(" expr ")" | "kappa(" expr ")"
           | "p(" INT "," (INT | "n") ")(" expr ")" | "(" expr ")"

``d[1,2]x2`` is d_{1,2} x^2, ``D[1]x1`` is the dual derivation d/d(d_1 x^1)
and ``D[]x1`` is d/dx^1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import forms
from .errors import ParseError
from .grading import ChartSpec

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<sym>[dD]\[\s*(?P<labels>[0-9]+(?:\s*,\s*[0-9]+)*)?\s*\]\s*(?P<symname>[A-Za-z_][A-Za-z0-9_]*))
  | (?P<num>[0-9]+(?:/[0-9]+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^(),])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int
    labels: tuple = ()
    name: str = ""


def tokenize(text: str) -> list:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup if m.lastgroup not in ("labels", "symname") else "sym"
        if m.group("sym"):
            kind = "sym"
        chunk = m.group(0)
        if kind == "sym":
            raw = m.group("labels")
            labels = tuple(int(s) for s in raw.split(",")) if raw else ()
            out.append(Token("sym", chunk, line, col, labels, m.group("symname")))
        elif kind != "ws":
            out.append(Token(kind, chunk, line, col))
        for ch in chunk:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    out.append(Token("end", "", line, col))
    return out


# -- syntax tree -------------------------------------------------------------------

class Expr:
    pass


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction


@dataclass(frozen=True)
class Coord(Expr):
    name: str


@dataclass(frozen=True)
class Gen(Expr):
    labels: tuple
    name: str


@dataclass(frozen=True)
class Dual(Expr):
    labels: tuple
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: int


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    params: tuple
    arg: Expr


_FN = re.compile(r"^(d|hatd)([0-9]+)$")


class _Parser:
    def __init__(self, text: str, chart: ChartSpec):
        self.toks = tokenize(text)
        self.i = 0
        self.chart = chart

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, msg, tok=None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.column)

    def eat(self, text):
        if self.tok.text != text:
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        self.i += 1

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            self.fail(f"unexpected {self.tok.text!r}")
        return e

    def expr(self):
        e = self.term()
        while self.tok.text in ("+", "-"):
            op = self.tok.text
            self.i += 1
            e = BinOp(op, e, self.term())
        return e

    def term(self):
        e = self.unary()
        while self.tok.text == "*":
            self.i += 1
            e = BinOp("*", e, self.unary())
        return e

    def unary(self):
        if self.tok.text == "-":
            self.i += 1
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.text == "^":
            self.i += 1
            if self.tok.kind != "num" or "/" in self.tok.text:
                self.fail("exponent must be a nonnegative integer")
            e = int(self.tok.text)
            self.i += 1
            return Pow(base, e)
        return base

    def int_token(self, allow_n=False):
        tok = self.tok
        if allow_n and tok.kind == "name" and tok.text == "n":
            self.i += 1
            return self.chart.n
        if tok.kind != "num" or "/" in tok.text:
            self.fail("expected an integer")
        self.i += 1
        return int(tok.text)

    def coordinate(self, name, tok):
        if name not in self.chart.names:
            self.fail(f"unknown coordinate {name!r}", tok)
        return name

    def check_labels(self, labels, bound, tok):
        if len(set(labels)) != len(labels):
            self.fail("repeated slot in subset label", tok)
        for s in labels:
            if not 1 <= s <= bound:
                self.fail(f"slot {s} out of range 1..{bound}", tok)
        return tuple(sorted(labels))

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Num(Fraction(tok.text))
        if tok.kind == "sym":
            self.i += 1
            name = self.coordinate(tok.name, tok)
            if tok.text[0] == "d":
                if not tok.labels:
                    self.fail("d[] needs at least one slot", tok)
                return Gen(self.check_labels(tok.labels, self.chart.slots, tok), name)
            return Dual(self.check_labels(tok.labels, self.chart.k, tok), name)
        if tok.text == "(":
            self.i += 1
            e = self.expr()
            self.eat(")")
            return e
        if tok.kind == "name":
            nxt = self.toks[self.i + 1]
            m = _FN.match(tok.text)
            if nxt.text == "(" and (m or tok.text in ("kappa", "p")):
                return self.call(tok, m)
            self.i += 1
            return Coord(self.coordinate(tok.text, tok))
        self.fail(f"unexpected {tok.text or 'end of input'!r}")

    def call(self, tok, m):
        self.i += 1
        if tok.text == "p":
            self.eat("(")
            slot = self.int_token()
            self.eat(",")
            s = self.int_token(allow_n=True)
            self.eat(")")
            if not 1 <= slot <= self.chart.slots:
                self.fail(f"slot {slot} out of range 1..{self.chart.slots}", tok)
            params = (slot, s)
            fn = "p"
        elif tok.text == "kappa":
            fn, params = "kappa", ()
        else:
            fn, slot = m.group(1), int(m.group(2))
            if not 1 <= slot <= self.chart.slots:
                self.fail(f"slot {slot} out of range 1..{self.chart.slots}", tok)
            params = (slot,)
        self.eat("(")
        arg = self.expr()
        self.eat(")")
        return Call(fn, params, arg)


def parse(text: str, chart: ChartSpec) -> Expr:
    return _Parser(text, chart).parse()


# -- printing ------------------------------------------------------------------------

def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return 1 if e.op in "+-" else 2
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    return 5


def to_text(e: Expr) -> str:
    def wrap(sub, need):
        s = to_text(sub)
        return f"({s})" if _prec(sub) < need else s

    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Coord):
        return e.name
    if isinstance(e, Gen):
        return f"d[{','.join(map(str, e.labels))}]{e.name}"
    if isinstance(e, Dual):
        return f"D[{','.join(map(str, e.labels))}]{e.name}"
    if isinstance(e, Neg):
        return "-" + wrap(e.arg, 3)
    if isinstance(e, Pow):
        return f"{wrap(e.base, 5)}^{e.exp}"
    if isinstance(e, BinOp):
        if e.op == "*":
            return f"{wrap(e.left, 2)}*{wrap(e.right, 3)}"
        return f"{wrap(e.left, 1)} {e.op} {wrap(e.right, 2)}"
    if isinstance(e, Call):
        inner = to_text(e.arg)
        if e.fn == "p":
            return f"p({e.params[0]},{e.params[1]})({inner})"
        if e.fn == "kappa":
            return f"kappa({inner})"
        return f"{e.fn}{e.params[0]}({inner})"
    raise TypeError(f"not an expression node: {e!r}")


# -- evaluation ----------------------------------------------------------------------

def evaluate(e: Expr, chart: ChartSpec):
    names = chart.names
    if isinstance(e, Num):
        return forms.const(chart, e.value)
    if isinstance(e, Coord):
        return forms.coord(chart, names.index(e.name) + 1)
    if isinstance(e, Gen):
        return forms.gen(chart, e.labels, names.index(e.name) + 1)
    if isinstance(e, Dual):
        return forms.dual(chart, e.labels, names.index(e.name) + 1)
    if isinstance(e, Neg):
        return -evaluate(e.arg, chart)
    if isinstance(e, Pow):
        return evaluate(e.base, chart) ** e.exp
    if isinstance(e, BinOp):
        a, b = evaluate(e.left, chart), evaluate(e.right, chart)
        return a + b if e.op == "+" else a - b if e.op == "-" else a * b
    if isinstance(e, Call):
        v = evaluate(e.arg, chart)
        if e.fn == "d":
            return forms.d(e.params[0], v)
        if e.fn == "kappa":
            return forms.kappa(v)
        if e.fn == "p":
            return forms.project(v, e.params[1], e.params[0])
        from .integral import hat_d

        return hat_d(e.params[0], forms.as_polyvector(v))
    raise TypeError(f"not an expression node: {e!r}")


def parse_element(text: str, chart: ChartSpec):
    return evaluate(parse(text, chart), chart)
