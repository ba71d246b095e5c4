"""Recursive-descent parsing of polynomials and first-order ODEs.

Grammar (whitespace is insignificant)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" INTEGER)?
    atom    := INTEGER | "x" | "y" | "(" expr ")"

``^`` binds tightest, then unary minus, then ``*`` and ``/``, then
``+``/``-``.  Exponents are non-negative integer literals and there is no
implicit multiplication.  In a polynomial, ``/`` may only divide by a
nonzero constant, which is how rational literals like ``1/2`` are read.
The right-hand side of an ODE may divide by arbitrary polynomials.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .arith import ONE, X, Y, ZERO, Poly, exact_div, gcd
from .darboux import VectorField


class ParseError(ValueError):
    def __init__(self, message: str, position: int, expected: frozenset[str] = frozenset()):
        self.position = position
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class ZeroDenominator(ValueError):
    """The ODE right-hand side has a zero denominator."""


_TOKEN = re.compile(r"\s*(?:(\d+)|([xy])|([-+*/^()]))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "num", "var", "op", "end"
    text: str
    pos: int


def _tokenize(text: str, offset: int = 0) -> list[_Tok]:
    toks = []
    pos = offset
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos,
                             frozenset({"integer", "x", "y", "operator", "parenthesis"}))
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(_Tok("num", m.group(1), start))
        elif m.group(2):
            toks.append(_Tok("var", m.group(2), start))
        else:
            toks.append(_Tok("op", m.group(3), start))
        pos = m.end()
    toks.append(_Tok("end", "", n))
    return toks


MAX_EXPONENT = 256
MAX_DEGREE = 1024

_ATOM_START = frozenset({"integer", "x", "y", "(", "-"})


class _Parser:
    """Values are (numerator, denominator) pairs of polynomials."""

    def __init__(self, text: str, offset: int, allow_poly_division: bool):
        self.toks = _tokenize(text, offset)
        self.i = 0
        self.allow_poly_division = allow_poly_division

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def parse(self) -> tuple[Poly, Poly]:
        val = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.text!r}", t.pos, frozenset({"+", "-", "*", "/", "end of input"}))
        return val

    def expr(self):
        n, d = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.take().text
            n2, d2 = self.term()
            if d == d2:
                n = n + n2 if op == "+" else n - n2
            else:
                n = n * d2 + n2 * d if op == "+" else n * d2 - n2 * d
                d = d * d2
        return n, d

    def term(self):
        n, d = self.unary()
        while self.peek().kind == "op" and self.peek().text in ("*", "/"):
            tok = self.take()
            n2, d2 = self.unary()
            if tok.text == "*":
                n, d = n * n2, d * d2
                continue
            if n2.is_zero():
                if self.allow_poly_division:
                    raise ZeroDenominator(f"division by zero at position {tok.pos}")
                raise ParseError("division by zero", tok.pos)
            if not self.allow_poly_division and not n2.is_constant():
                raise ParseError("division by a non-constant polynomial", tok.pos, frozenset({"nonzero constant"}))
            n, d = n * d2, d * n2
        return n, d

    def unary(self):
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.take()
            n, d = self.unary()
            return -n, d
        return self.power()

    def power(self):
        n, d = self.atom()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.take()
            e = self.peek()
            if e.kind != "num":
                raise ParseError("exponent must be a non-negative integer literal", e.pos, frozenset({"integer"}))
            self.take()
            k = int(e.text)
            if k > MAX_EXPONENT or max(n.degree(), d.degree(), 1) * k > MAX_DEGREE:
                raise ParseError(f"power too large (exponent cap {MAX_EXPONENT}, degree cap {MAX_DEGREE})",
                                 e.pos, frozenset({"integer"}))
            return n**k, d**k
        return n, d

    def atom(self):
        t = self.take()
        if t.kind == "num":
            return Poly.const(int(t.text)), ONE
        if t.kind == "var":
            return (X if t.text == "x" else Y), ONE
        if t.kind == "op" and t.text == "(":
            val = self.expr()
            close = self.take()
            if close.kind != "op" or close.text != ")":
                raise ParseError(f"unexpected {close.text or 'end of input'!r}", close.pos,
                                 frozenset({")", "+", "-", "*", "/"}))
            return val
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos, _ATOM_START)


def parse_poly(text: str) -> Poly:
    n, d = _Parser(text, 0, allow_poly_division=False).parse()
    return n / d


@dataclass(frozen=True)
class OdeSpec:
    """The ODE ``dy/dx = M/N``.

    ``reduced`` is set when a nonconstant common factor of M and N was
    cancelled at parse time.
    """

    M: Poly
    N: Poly
    source_text: str
    reduced: bool = False

    @property
    def field(self) -> VectorField:
        return VectorField(self.M, self.N)


_ODE_HEAD = re.compile(r"\s*dy\s*/\s*dx\s*=")


def parse_ode(text: str) -> OdeSpec:
    """Parse ``dy/dx = <expr>`` where ``<expr>`` may be a quotient.

    Common polynomial factors of numerator and denominator are cancelled;
    a constant denominator is folded into the numerator so that N = 1.
    """
    head = _ODE_HEAD.match(text)
    if not head:
        raise ParseError("ODE must start with 'dy/dx ='", 0, frozenset({"dy/dx ="}))
    M, N = _Parser(text, head.end(), allow_poly_division=True).parse()
    if N.is_zero():
        raise ZeroDenominator("denominator of the right-hand side is zero")
    reduced = False
    if M.is_zero():
        M, N = ZERO, ONE
    else:
        g = gcd(M, N)
        if not g.is_constant():
            reduced = True
            M, N = exact_div(M, g), exact_div(N, g)
    if N.is_constant():
        M, N = M / N, ONE
    return OdeSpec(M, N, text.strip(), reduced)
