"""Exact sparse bivariate polynomials and rational functions over Q.

A :class:`Poly` maps monomials ``(deg_x, deg_y)`` to nonzero
:class:`fractions.Fraction` coefficients.  Monomials are ordered graded
lexicographically with ``x > y``; that order fixes leading terms,
normalization and the canonical text form, e.g. ``3*x^2*y^2 + x^3 + 1``.

Values are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as igcd, lcm
from numbers import Rational as _RationalABC
from typing import Iterable, Iterator, Mapping

Monomial = tuple[int, int]
Coeff = int | Fraction


class DoesNotDivide(ArithmeticError):
    """Raised by :func:`exact_div` when the divisor leaves a remainder."""


def mono_key(m: Monomial) -> tuple[int, int]:
    """Sort key realizing graded-lex order with x > y."""
    return (m[0] + m[1], m[0])


class Poly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Coeff] | Iterable[tuple[Monomial, Coeff]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Monomial, Fraction] = {}
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in monomial {(i, j)}")
            c = Fraction(c)
            if c:
                clean[(int(i), int(j))] = clean.get((i, j), Fraction(0)) + c
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction]) -> Poly:
        # caller guarantees no zero coefficients
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Coeff) -> Poly:
        c = Fraction(c)
        return cls._raw({(0, 0): c} if c else {})

    @classmethod
    def monomial(cls, i: int, j: int, c: Coeff = 1) -> Poly:
        return cls({(i, j): c})

    @classmethod
    def coerce(cls, other) -> Poly:
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, _RationalABC)):
            return cls.const(Fraction(other))
        raise TypeError(f"cannot coerce {type(other).__name__} to Poly")

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        """Terms in descending monomial order."""
        for m in sorted(self._terms, key=mono_key, reverse=True):
            yield m, self._terms[m]

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((i + j for i, j in self._terms), default=-1)

    def degree_in(self, var: str) -> int:
        k = _var_index(var)
        return max((m[k] for m in self._terms), default=-1)

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms, key=mono_key)

    def leading_coeff(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return self._terms[self.leading_monomial()]

    def trailing_monomial(self) -> Monomial:
        return min(self._terms, key=mono_key)

    def homogeneous_part(self, k: int) -> Poly:
        return Poly._raw({m: c for m, c in self._terms.items() if m[0] + m[1] == k})

    def sort_key(self) -> tuple:
        """Deterministic total order on polynomials (degree first)."""
        return (self.degree(), tuple((mono_key(m), c) for m, c in self.items()))

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other) -> Poly:
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> Poly:
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return Poly.coerce(other) - self

    def __mul__(self, other) -> Poly:
        if isinstance(other, (int, _RationalABC)) and not isinstance(other, Poly):
            c = Fraction(other)
            if not c:
                return ZERO
            return Poly._raw({m: v * c for m, v in self._terms.items()})
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                m = (i1 + i2, j1 + j2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, c) -> Poly:
        """Division by a nonzero scalar only; use :func:`exact_div` for polynomials."""
        if isinstance(c, Poly):
            if not c.is_constant() or c.is_zero():
                return NotImplemented
            c = c.coeff(0, 0)
        c = Fraction(c)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return Poly._raw({m: v / c for m, v in self._terms.items()})

    def __eq__(self, other) -> bool:
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- normal forms -------------------------------------------------
    def monic(self) -> Poly:
        """Scale so the leading coefficient is 1 (zero stays zero)."""
        if not self._terms:
            return self
        return self / self.leading_coeff()

    def primitive(self) -> Poly:
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if not self._terms:
            return self
        den = lcm(*(c.denominator for c in self._terms.values()))
        ints = [int(c * den) for c in self._terms.values()]
        g = 0
        for v in ints:
            g = igcd(g, v)
        scale = Fraction(den, g)
        if self.leading_coeff() < 0:
            scale = -scale
        return self * scale

    # -- calculus / evaluation ----------------------------------------
    def diff(self, var: str) -> Poly:
        k = _var_index(var)
        out: dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            e = m[k]
            if e:
                nm = (m[0] - 1, m[1]) if k == 0 else (m[0], m[1] - 1)
                out[nm] = c * e
        return Poly._raw(out)

    def eval(self, x0, y0):
        """Substitute exact (or float) values for x and y."""
        total = Fraction(0) if isinstance(x0, (int, _RationalABC)) and isinstance(y0, (int, _RationalABC)) else 0.0
        for (i, j), c in self._terms.items():
            total += c * x0**i * y0**j
        return total

    def float_terms(self) -> list[tuple[int, int, float]]:
        return [(i, j, float(c)) for (i, j), c in self._terms.items()]

    # -- printing -----------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for idx, ((i, j), c) in enumerate(self.items()):
            neg = c < 0
            a = -c if neg else c
            factors = []
            if i:
                factors.append("x" if i == 1 else f"x^{i}")
            if j:
                factors.append("y" if j == 1 else f"y^{j}")
            if a != 1 or not factors:
                factors.insert(0, _fmt_fraction(a))
            body = "*".join(factors)
            if idx == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


def _fmt_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def fmt_rational(c: Coeff) -> str:
    return _fmt_fraction(Fraction(c))


def _var_index(var: str) -> int:
    if var == "x":
        return 0
    if var == "y":
        return 1
    raise ValueError(f"unknown variable {var!r}; expected 'x' or 'y'")


ZERO = Poly._raw({})
ONE = Poly._raw({(0, 0): Fraction(1)})
X = Poly._raw({(1, 0): Fraction(1)})
Y = Poly._raw({(0, 1): Fraction(1)})


# -- module-level operations ------------------------------------------
def add(a: Poly, b: Poly) -> Poly:
    return a + b


def mul(a: Poly, b: Poly) -> Poly:
    return a * b


def partial(p: Poly, var: str) -> Poly:
    return p.diff(var)


def evaluate(p: Poly, x0, y0):
    return p.eval(x0, y0)


def divmod_poly(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Division of ``a`` by a single divisor ``b`` under graded-lex order.

    Returns ``(q, r)`` with ``a = q*b + r`` and no term of ``r`` divisible
    by the leading monomial of ``b``.  The remainder is unique and linear
    in ``a``.
    """
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    lm = b.leading_monomial()
    lc = b.leading_coeff()
    btail = [(m, c) for m, c in b._terms.items() if m != lm]
    p = dict(a._terms)
    q: dict[Monomial, Fraction] = {}
    r: dict[Monomial, Fraction] = {}
    while p:
        m = max(p, key=mono_key)
        c = p.pop(m)
        if m[0] >= lm[0] and m[1] >= lm[1]:
            t = (m[0] - lm[0], m[1] - lm[1])
            tc = c / lc
            q[t] = tc
            for (bi, bj), bc in btail:
                k = (bi + t[0], bj + t[1])
                v = p.get(k, 0) - tc * bc
                if v:
                    p[k] = v
                else:
                    p.pop(k, None)
        else:
            r[m] = c
    return Poly._raw(q), Poly._raw(r)


def exact_div(a: Poly, b: Poly) -> Poly:
    """Return ``q`` with ``a == q*b``; raise :class:`DoesNotDivide` otherwise."""
    q, r = divmod_poly(a, b)
    if r:
        raise DoesNotDivide(f"{b} does not divide {a}")
    return q


def divides(b: Poly, a: Poly) -> bool:
    return not divmod_poly(a, b)[1]


# -- gcd ----------------------------------------------------------------
def _x_coeffs(p: Poly) -> dict[int, Poly]:
    """View ``p`` as a polynomial in x with coefficients in Q[y]."""
    out: dict[int, dict[Monomial, Fraction]] = {}
    for (i, j), c in p._terms.items():
        out.setdefault(i, {})[(0, j)] = c
    return {i: Poly._raw(t) for i, t in out.items()}


def _gcd_y(a: Poly, b: Poly) -> Poly:
    # univariate Euclid in Q[y]; inputs have no x
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return a.monic()


def _content_x(p: Poly) -> Poly:
    g = ZERO
    for c in _x_coeffs(p).values():
        g = _gcd_y(g, c) if g else c.monic()
        if g == ONE:
            break
    return g


def _prem_x(a: Poly, b: Poly) -> Poly:
    db = b.degree_in("x")
    lcb = _x_coeffs(b)[db]
    r = a
    while r and r.degree_in("x") >= db:
        dr = r.degree_in("x")
        lcr = _x_coeffs(r)[dr]
        r = lcb * r - lcr * Poly.monomial(dr - db, 0) * b
    return r


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor via primitive pseudo-remainder sequences.

    ``a`` and ``b`` are treated as polynomials in x over Q[y]; contents
    are handled with univariate gcds in y.
    """
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    ca, cb = _content_x(a), _content_x(b)
    pa, pb = exact_div(a, ca), exact_div(b, cb)
    c = _gcd_y(ca, cb)
    if pa.degree_in("x") < pb.degree_in("x"):
        pa, pb = pb, pa
    while pb:
        if pb.degree_in("x") == 0:
            pa = ONE
            break
        r = _prem_x(pa, pb)
        pa = pb
        pb = exact_div(r, _content_x(r)) if r else ZERO
    g = (c * pa).monic()
    # post-hoc certificate
    assert divides(g, a) and divides(g, b), "gcd certificate failed"
    return g


# -- rational functions -----------------------------------------------
@dataclass(frozen=True)
class RationalFunction:
    """Reduced quotient ``num/den`` with a monic denominator.

    Build through :func:`rf_reduce`; the constructor does not reduce.
    """

    num: Poly
    den: Poly

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def eval(self, x0, y0):
        return self.num.eval(x0, y0) / self.den.eval(x0, y0)

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        num, den = str(self.num), str(self.den)
        if len(self.num.terms) > 1:
            num = f"({num})"
        if len(self.den.terms) > 1 or self.den.leading_coeff() != 1:
            den = f"({den})"
        return f"{num}/{den}"


def rf_reduce(num: Poly, den: Poly) -> RationalFunction:
    if den.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero():
        return RationalFunction(ZERO, ONE)
    g = gcd(num, den)
    n, d = exact_div(num, g), exact_div(den, g)
    lc = d.leading_coeff()
    return RationalFunction(n / lc, d / lc)
