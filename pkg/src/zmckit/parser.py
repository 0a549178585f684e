"""Recursive-descent parser for polynomial text.

Grammar (whitespace-insensitive, implicit multiplication by juxtaposition):

    poly     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*'? factor)*
    factor   := rational | 'sqrt' '(' posint ')' | var ('^' posint)?
              | '(' poly ')' ('^' posint)?
    var      := 'x' posint
    rational := posint ('/' posint)?

The exponent on a parenthesized group is a convenience extension beyond the
core grammar.  sqrt radicands normalize on construction (sqrt(8) -> 2 sqrt(2));
mixing e.g. sqrt(2) and sqrt(3) in one polynomial raises ValueError.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly
from .scalars import QuadExtScalar


class ParseError(ValueError):
    """Syntax error with the offending position in the input text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOK_NUM = "num"
_TOK_VAR = "var"
_TOK_SQRT = "sqrt"
_TOK_EOF = "eof"
_PUNCT = set("+-*/^()")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens: list[tuple[str, object, int]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append((_TOK_NUM, int(text[i:j]), i))
            i = j
            continue
        if ch == "x":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("variable must be 'x' followed by digits", i)
            tokens.append((_TOK_VAR, int(text[i + 1 : j]), i))
            i = j
            continue
        if text.startswith("sqrt", i):
            tokens.append((_TOK_SQRT, "sqrt", i))
            i += 4
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append((_TOK_EOF, None, n))
    return tokens


class _Parser:
    def __init__(self, tokens, nvars: int):
        self.tokens = tokens
        self.pos = 0
        self.nvars = nvars

    @property
    def current(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        kind_now, value, pos = self.current
        if kind_now != kind:
            raise ParseError(f"expected {kind!r}, found {kind_now!r}", pos)
        return self.advance()

    def parse_poly(self) -> Poly:
        sign = 1
        if self.current[0] in ("+", "-"):
            if self.advance()[0] == "-":
                sign = -1
        total = self.parse_term()
        if sign < 0:
            total = -total
        while self.current[0] in ("+", "-"):
            op = self.advance()[0]
            term = self.parse_term()
            total = total - term if op == "-" else total + term
        return total

    def parse_term(self) -> Poly:
        product = self.parse_factor()
        while True:
            kind = self.current[0]
            if kind == "*":
                self.advance()
                product = product * self.parse_factor()
            elif kind in (_TOK_NUM, _TOK_VAR, _TOK_SQRT, "("):
                product = product * self.parse_factor()
            else:
                return product

    def _posint(self, what: str) -> int:
        kind, value, pos = self.current
        if kind != _TOK_NUM or value < 1:
            raise ParseError(f"expected a positive integer {what}", pos)
        self.advance()
        return value

    def parse_factor(self) -> Poly:
        kind, value, pos = self.current
        if kind == _TOK_NUM:
            self.advance()
            numerator = value
            if self.current[0] == "/":
                self.advance()
                denominator = self._posint("denominator")
                return Poly.constant(self.nvars, Fraction(numerator, denominator))
            return Poly.constant(self.nvars, numerator)
        if kind == _TOK_SQRT:
            self.advance()
            self.expect("(")
            radicand = self._posint("under sqrt")
            self.expect(")")
            return Poly.constant(self.nvars, QuadExtScalar.sqrt(radicand))
        if kind == _TOK_VAR:
            self.advance()
            if not 1 <= value <= self.nvars:
                raise ParseError(
                    f"variable index {value} out of range 1..{self.nvars}", pos
                )
            base = Poly.variable(self.nvars, value)
            if self.current[0] == "^":
                self.advance()
                return base ** self._posint("exponent")
            return base
        if kind == "(":
            self.advance()
            inner = self.parse_poly()
            self.expect(")")
            if self.current[0] == "^":
                self.advance()
                return inner ** self._posint("exponent")
            return inner
        raise ParseError("expected a number, sqrt, variable, or '('", pos)


def parse_poly(text: str, nvars: int) -> Poly:
    """Parse polynomial text into an exact Poly with the given variable count."""
    if nvars < 1:
        raise ValueError(f"nvars must be positive, got {nvars}")
    parser = _Parser(_tokenize(text), nvars)
    result = parser.parse_poly()
    kind, _, pos = parser.current
    if kind != _TOK_EOF:
        raise ParseError(f"unexpected trailing input {kind!r}", pos)
    return result
