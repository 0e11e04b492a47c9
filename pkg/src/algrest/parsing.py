"""Text syntax for polynomials and differential forms.

Grammar (whitespace is ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*' factor) | ('/' INT))*
    factor := atom ('^' (INT | atom))*
    atom   := INT | NAME | 'd'NAME | '(' expr ')'

``x^2`` is a power when the left side is a function and the right side an
integer; otherwise ``^`` is the wedge product, so ``x3^2*dx1^dx3`` reads as
``x3**2 * (dx1 wedge dx3)``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .forms import DiffForm, wedge
from .poly import Polynomial, VarSet


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.message = message
        self.text = text
        self.pos = pos
        where = f" at column {pos + 1}" if text else ""
        super().__init__(f"{message}{where}" + (f": {text!r}" if text else ""))


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            out.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            if m.group(3) not in "+-*/^()":
                raise ParseError(f"unexpected character {m.group(3)!r}", text, m.start(3))
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, varset: VarSet):
        self.text = text
        self.varset = varset
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, self.text, tok[2])

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] != "op":
            raise self.error(f"expected {value!r}", tok)

    def parse(self) -> DiffForm:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        val = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return val

    def expr(self) -> DiffForm:
        sign = 1
        if self.peek()[:2] in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        val = self.term() * sign
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()
            rhs = self.term()
            val = self._add(val, rhs if op[1] == "+" else -rhs, op)
        return val

    def _add(self, a: DiffForm, b: DiffForm, tok) -> DiffForm:
        if a.degree != b.degree:
            if not a:
                return b
            if not b:
                return a
            raise self.error(f"cannot add a {a.degree}-form and a {b.degree}-form", tok)
        return a + b

    def term(self) -> DiffForm:
        val = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()
            if op[1] == "*":
                val = self._wedge(val, self.factor(), op)
            else:
                tok = self.take()
                if tok[0] != "int" or tok[1] == 0:
                    raise self.error("division is only by a nonzero integer", tok)
                val = val * Fraction(1, tok[1])
        return val

    def _wedge(self, a: DiffForm, b: DiffForm, tok) -> DiffForm:
        try:
            return wedge(a, b)
        except ValueError as exc:
            raise self.error(str(exc), tok) from None

    def factor(self) -> DiffForm:
        val = self.atom()
        while self.peek()[:2] == ("op", "^"):
            op = self.take()
            if self.peek()[0] == "int" and val.degree == 0:
                val = DiffForm.function(val.coefficient() ** self.take()[1])
            else:
                val = self._wedge(val, self.atom(), op)
        return val

    def atom(self) -> DiffForm:
        tok = self.take()
        kind, value, _ = tok
        v = self.varset
        if kind == "int":
            return DiffForm.function(Polynomial.constant(v, value))
        if kind == "name":
            if value in v.names:
                return DiffForm.function(v.var(value))
            if value.startswith("d") and value[1:] in v.names:
                return DiffForm.dx(v, v.index(value[1:]))
            raise self.error(f"unknown variable {value!r}", tok)
        if kind == "op" and value == "(":
            val = self.expr()
            self.expect(")")
            return val
        raise self.error("expected a number, variable or '('", tok)


def parse_form(text: str, varset: VarSet) -> DiffForm:
    return _Parser(text, varset).parse()


def parse_polynomial(text: str, varset: VarSet) -> Polynomial:
    val = parse_form(text, varset)
    if val.degree != 0:
        raise ParseError(f"expected a polynomial, got a {val.degree}-form", text, 0)
    return val.coefficient()
