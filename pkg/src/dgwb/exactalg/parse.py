"""Recursive-descent parser for the polynomial text grammar.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | NAME | "(" expr ")"

Juxtaposition is rejected.  The parser is generic over the value type so the
same code reads base polynomials and graded expressions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Generic, TypeVar

T = TypeVar("T")

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")


class ParseError(ValueError):
    """Syntax or symbol error with a 1-based position in the source text."""

    def __init__(self, message: str, text: str, offset: int):
        line = text.count("\n", 0, offset) + 1
        col = offset - (text.rfind("\n", 0, offset) + 1) + 1
        self.message = message
        self.line = line
        self.column = col
        super().__init__(f"{message} at line {line}, column {col}")


@dataclass
class _Tok:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(_Tok("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(_Tok("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise ParseError(f"unexpected character {ch!r}", text, m.start(3))
            toks.append(_Tok("op", ch, m.start(3)))
        pos = m.end()
    toks.append(_Tok("end", "", n))
    return toks


class ExpressionParser(Generic[T]):
    """Parse text into values built by ``const`` and ``symbol`` callbacks."""

    def __init__(self, const: Callable[[Fraction], T], symbol: Callable[[str], T]):
        self.const = const
        self.symbol = symbol

    def parse(self, text: str) -> T:
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        if self.toks[0].kind == "end":
            raise ParseError("empty expression", text, 0)
        value = self._expr()
        tok = self.toks[self.i]
        if tok.kind != "end":
            raise ParseError(f"unexpected token {tok.value!r}", text, tok.pos)
        return value

    def _peek(self) -> _Tok:
        return self.toks[self.i]

    def _take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def _expect(self, op: str) -> None:
        tok = self._take()
        if tok.kind != "op" or tok.value != op:
            raise ParseError(f"expected {op!r}", self.text, tok.pos)

    def _expr(self) -> T:
        value = self._term()
        while self._peek().kind == "op" and self._peek().value in "+-":
            op = self._take().value
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self) -> T:
        value = self._unary()
        while True:
            tok = self._peek()
            if tok.kind == "op" and tok.value == "*":
                self._take()
                value = value * self._unary()
            elif tok.kind in ("int", "name") or (tok.kind == "op" and tok.value == "("):
                raise ParseError("juxtaposition is not allowed; use '*'", self.text, tok.pos)
            else:
                return value

    def _unary(self) -> T:
        tok = self._peek()
        if tok.kind == "op" and tok.value in "+-":
            self._take()
            inner = self._unary()
            return inner if tok.value == "+" else -inner
        return self._power()

    def _power(self) -> T:
        base = self._atom()
        tok = self._peek()
        if tok.kind == "op" and tok.value == "^":
            self._take()
            exp = self._take()
            if exp.kind != "int":
                raise ParseError("exponent must be a nonnegative integer", self.text, exp.pos)
            base = base ** int(exp.value)
            nxt = self._peek()
            if nxt.kind == "op" and nxt.value == "^":
                raise ParseError("chained '^' is ambiguous; use parentheses", self.text, nxt.pos)
        return base

    def _atom(self) -> T:
        tok = self._take()
        if tok.kind == "int":
            num = int(tok.value)
            nxt = self._peek()
            if nxt.kind == "op" and nxt.value == "/":
                self._take()
                den = self._take()
                if den.kind != "int":
                    raise ParseError("expected integer denominator", self.text, den.pos)
                if int(den.value) == 0:
                    raise ParseError("zero denominator", self.text, den.pos)
                return self.const(Fraction(num, int(den.value)))
            return self.const(Fraction(num))
        if tok.kind == "name":
            try:
                return self.symbol(tok.value)
            except KeyError:
                raise ParseError(f"unknown symbol {tok.value}", self.text, tok.pos) from None
        if tok.kind == "op" and tok.value == "(":
            value = self._expr()
            self._expect(")")
            return value
        if tok.kind == "end":
            raise ParseError("unexpected end of expression", self.text, tok.pos)
        raise ParseError(f"unexpected token {tok.value!r}", self.text, tok.pos)


def parse_polynomial(text: str, ring) -> "Polynomial":
    from .polynomial import Polynomial  # noqa: F401

    def symbol(name):
        if name not in ring.index:
            raise KeyError(name)
        return ring.var(name)

    return ExpressionParser(ring.const, symbol).parse(text)


def parse_rational(text: str) -> Fraction:
    """Parse ``a``, ``-a`` or ``a/b`` exactly."""
    s = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(s)
