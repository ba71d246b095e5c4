"""The derivation D = N*d/dx + M*d/dy and its Darboux polynomials.

A Darboux polynomial ``f`` satisfies ``D[f] = g*f`` for a polynomial
cofactor ``g``.  :func:`find_darboux` searches degree by degree.  For a
fixed degree ``d`` write ``f = f_d + ... + f_0`` and ``g = g_{m-1} + ... +
g_0`` in homogeneous parts, with ``m = max(deg M, deg N)``.  The top
homogeneous part ``f_d`` must be a product of invariant lines of the top
part of the field, i.e. of irreducible factors of ``x*M_m - y*N_m``, which
gives a finite list of candidates.  Once ``f_d`` and ``g_{m-1}`` are fixed,
each lower degree block of ``D[f] - g*f = 0`` is linear in the newly
appearing parts ``f_{d-s}`` and ``g_{m-1-s}``.  Underdetermined blocks
introduce parameters; the leftover consistency conditions are small
polynomial systems in those parameters.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from .arith import ONE, X, Y, DoesNotDivide, Poly, divides, exact_div
from .linalg import rref_transform

log = logging.getLogger(__name__)


class NotDarboux(ArithmeticError):
    """``f`` does not divide ``D[f]``."""


@dataclass(frozen=True)
class VectorField:
    M: Poly
    N: Poly

    def __post_init__(self):
        if self.M.is_zero() and self.N.is_zero():
            raise ValueError("M and N are both zero")

    @property
    def degree(self) -> int:
        return max(self.M.degree(), self.N.degree())

    def __call__(self, p: Poly) -> Poly:
        return apply_D(self, p)


@dataclass(frozen=True)
class DarbouxPair:
    f: Poly
    g: Poly

    def __iter__(self):
        return iter((self.f, self.g))


def apply_D(vf: VectorField, p: Poly) -> Poly:
    return vf.N * p.diff("x") + vf.M * p.diff("y")


def cofactor(vf: VectorField, f: Poly) -> Poly:
    if f.is_constant():
        raise ValueError("cofactor of a constant polynomial is undefined")
    try:
        return exact_div(apply_D(vf, f), f)
    except DoesNotDivide:
        raise NotDarboux(f"{f} does not divide D[{f}]") from None


def certify(vf: VectorField, f: Poly) -> DarbouxPair | None:
    """Normalized pair for ``f`` or ``None`` when ``f`` is not Darboux."""
    if f.is_constant():
        return None
    f = f.monic()
    try:
        return DarbouxPair(f, cofactor(vf, f))
    except NotDarboux:
        return None


# ---------------------------------------------------------------------------
# Polynomials in x, y and auxiliary parameters t_0, t_1, ...
# Keys are (i, j, tkey) with tkey a sorted tuple of (param index, exponent).


class _Sym:
    __slots__ = ("t",)

    def __init__(self, t: dict | None = None):
        self.t = t or {}

    @classmethod
    def from_poly(cls, p: Poly) -> _Sym:
        return cls({(i, j, ()): c for (i, j), c in p.terms.items()})

    @classmethod
    def param(cls, k: int) -> _Sym:
        return cls({(0, 0, ((k, 1),)): Fraction(1)})

    @classmethod
    def const(cls, c) -> _Sym:
        c = Fraction(c)
        return cls({(0, 0, ()): c} if c else {})

    def __bool__(self):
        return bool(self.t)

    def __add__(self, other: _Sym) -> _Sym:
        out = dict(self.t)
        for k, c in other.t.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return _Sym(out)

    def __neg__(self) -> _Sym:
        return _Sym({k: -c for k, c in self.t.items()})

    def __sub__(self, other: _Sym) -> _Sym:
        return self + (-other)

    def scale(self, c) -> _Sym:
        c = Fraction(c)
        if not c:
            return _Sym()
        return _Sym({k: v * c for k, v in self.t.items()})

    def __mul__(self, other: _Sym) -> _Sym:
        out: dict = {}
        for (i1, j1, t1), c1 in self.t.items():
            for (i2, j2, t2), c2 in other.t.items():
                k = (i1 + i2, j1 + j2, _tmul(t1, t2))
                out[k] = out.get(k, 0) + c1 * c2
        return _Sym({k: c for k, c in out.items() if c})

    def mul_poly(self, p: Poly) -> _Sym:
        return self * _Sym.from_poly(p)

    def diff(self, var: str) -> _Sym:
        out = {}
        for (i, j, tk), c in self.t.items():
            if var == "x" and i:
                out[(i - 1, j, tk)] = c * i
            elif var == "y" and j:
                out[(i, j - 1, tk)] = c * j
        return _Sym(out)

    def homogeneous(self, deg: int) -> _Sym:
        return _Sym({k: c for k, c in self.t.items() if k[0] + k[1] == deg})

    def coeff_at(self, i: int, j: int) -> _Sym:
        """Parameter polynomial multiplying x^i y^j."""
        return _Sym({(0, 0, tk): c for (a, b, tk), c in self.t.items() if (a, b) == (i, j)})

    def params(self) -> set[int]:
        return {k for (_, _, tk) in self.t for k, _ in tk}

    def param_degree(self) -> int:
        return max((sum(e for _, e in tk) for (_, _, tk) in self.t), default=-1)

    def subs(self, k: int, expr: _Sym) -> _Sym:
        if k not in self.params():
            return self
        out = _Sym()
        powers = {0: _Sym.const(1)}
        for (i, j, tk), c in self.t.items():
            e = dict(tk).pop(k, 0)
            rest = tuple(p for p in tk if p[0] != k)
            term = _Sym({(i, j, rest): c})
            if e:
                while e not in powers:
                    n = max(powers)
                    powers[n + 1] = powers[n] * expr
                term = term * powers[e]
            out = out + term
        return out

    def to_poly(self) -> Poly:
        """Drop parameter-dependent terms (all remaining parameters set to 0)."""
        return Poly({(i, j): c for (i, j, tk), c in self.t.items() if not tk})


def _tmul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for k, e in b:
        d[k] = d.get(k, 0) + e
    return tuple(sorted(d.items()))


def _isolate(c: _Sym) -> tuple[int, _Sym] | None:
    """Find a parameter occurring only as a bare linear term with constant
    coefficient and return ``(k, expr)`` meaning ``t_k = expr``."""
    for k in sorted(c.params(), reverse=True):
        coef = None
        ok = True
        for (_, _, tk), v in c.t.items():
            if any(p == k for p, _ in tk):
                if tk == ((k, 1),) and coef is None:
                    coef = v
                else:
                    ok = False
                    break
        if ok and coef:
            rest = _Sym({key: v for key, v in c.t.items() if key[2] != ((k, 1),)})
            return k, rest.scale(-1 / coef)
    return None


def _rational_roots(coeffs: dict[int, Fraction]) -> list[Fraction]:
    t = sympy.Symbol("t")
    poly = sympy.Poly({(e,): sympy.Rational(v.numerator, v.denominator) for e, v in coeffs.items()}, t, domain="QQ")
    roots = set()
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -b / a
            roots.add(Fraction(int(r.p), int(r.q)))
    return sorted(roots)


def _univariate_roots(c: _Sym) -> tuple[int, list[Fraction]] | None:
    ps = c.params()
    if len(ps) != 1:
        return None
    (k,) = ps
    coeffs: dict[int, Fraction] = {}
    for (_, _, tk), v in c.t.items():
        e = tk[0][1] if tk else 0
        coeffs[e] = coeffs.get(e, 0) + v
    return k, _rational_roots(coeffs)


def _triangularize(cons: list[_Sym]) -> list[_Sym] | None:
    """Lex Groebner basis of the parameter system; ``None`` if inconsistent."""
    ks = sorted(set().union(*(c.params() for c in cons)))
    syms = sympy.symbols([f"t{k}" for k in ks])
    index = {k: n for n, k in enumerate(ks)}
    exprs = []
    for c in cons:
        e = 0
        for (_, _, tk), v in c.t.items():
            mon = sympy.Rational(v.numerator, v.denominator)
            for k, p in tk:
                mon *= syms[index[k]] ** p
            e += mon
        exprs.append(e)
    basis = sympy.groebner(exprs, *syms, order="lex", domain="QQ")
    if list(basis.exprs) == [1]:
        return None
    out = []
    for b in basis.polys:
        terms = {}
        for monom, v in b.terms():
            tk = tuple((ks[n], e) for n, e in enumerate(monom) if e)
            terms[(0, 0, tk)] = Fraction(int(v.p), int(v.q))
        out.append(_Sym(terms))
    return out


def _solve_constraints(cons: list[_Sym], triangular: bool = False) -> list[dict[int, _Sym]]:
    """Rational solutions of a polynomial system in the parameters.

    Isolable parameters are substituted away and univariate equations are
    split over their rational roots.  A system with neither is first put
    into lex Groebner form; if that still has no univariate member the
    solution set is not finite and the branch is abandoned (logged).
    """
    cons = [c for c in cons if c]
    for c in cons:
        if not c.params():
            return []
    if not cons:
        return [{}]
    for c in cons:
        iso = _isolate(c)
        if iso:
            k, expr = iso
            sols = _solve_constraints([d.subs(k, expr) for d in cons if d is not c], triangular)
            return [_compose(s, k, expr) for s in sols]
    for c in cons:
        ur = _univariate_roots(c)
        if ur:
            k, roots = ur
            out = []
            for r in roots:
                val = _Sym.const(r)
                rest = [d.subs(k, val) for d in cons]
                out.extend(_compose(s, k, val) for s in _solve_constraints(rest, triangular))
            return out
    if not triangular:
        tri = _triangularize(cons)
        if tri is None:
            return []
        if any(len(c.params()) == 1 for c in tri):
            return _solve_constraints(tri, triangular=True)
    log.debug("abandoning positive-dimensional parameter system with %d equations", len(cons))
    return []


def _compose(sol: dict[int, _Sym], k: int, expr: _Sym) -> dict[int, _Sym]:
    out = dict(sol)
    for j, e in sol.items():
        if k in e.params():
            out[j] = e.subs(k, expr)
    e = expr
    for j, v in sol.items():
        e = e.subs(j, v)
    out[k] = e
    return out


# ---------------------------------------------------------------------------
# top-degree candidates


def _homogeneous_monomials(deg: int) -> list[tuple[int, int]]:
    """Monomials of total degree ``deg`` in descending graded-lex order."""
    return [(deg - j, j) for j in range(deg + 1)]


def _binary_form_factors(C: Poly) -> list[Poly]:
    """Monic irreducible factors over Q of a nonzero binary form."""
    ymult = min(j for (_, j) in C.terms)
    factors = [Y] if ymult else []
    x = sympy.Symbol("x")
    coeffs = {(i,): sympy.Rational(c.numerator, c.denominator) for (i, _), c in C.terms.items()}
    uni = sympy.Poly(coeffs, x, domain="QQ")
    for fac, _ in uni.factor_list()[1]:
        cs = fac.all_coeffs()
        deg = len(cs) - 1
        terms = {(deg - k, k): Fraction(int(v.p), int(v.q)) for k, v in enumerate(cs) if v}
        factors.append(Poly(terms).monic())
    return sorted(set(factors), key=Poly.sort_key)


DICRITICAL_SLOPES = (Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))


def top_candidates(vf: VectorField, d: int) -> list[Poly]:
    """Candidate monic top homogeneous parts of degree ``d``."""
    m = vf.degree
    Mm, Nm = vf.M.homogeneous_part(m), vf.N.homogeneous_part(m)
    C = X * Mm - Y * Nm
    if C:
        base = _binary_form_factors(C)
    else:
        # every binary form is invariant; fall back to a finite grid of lines
        base = [Y] + [X + Y * s for s in DICRITICAL_SLOPES]
    out = set()
    for size in range(1, d + 1):
        for combo in itertools.combinations_with_replacement(base, size):
            if sum(p.degree() for p in combo) != d:
                continue
            prod = ONE
            for p in combo:
                prod = prod * p
            out.add(prod.monic())
    return sorted(out, key=Poly.sort_key)


# ---------------------------------------------------------------------------


def _block_solve(vf: VectorField, d: int, f_top: Poly) -> list[Poly]:
    m = vf.degree
    Dm = VectorField(vf.M.homogeneous_part(m), vf.N.homogeneous_part(m))
    try:
        g_top = exact_div(apply_D(Dm, f_top), f_top)
    except DoesNotDivide:
        return []
    if m == 0 and g_top:
        return []

    Msym, Nsym = _Sym.from_poly(vf.M), _Sym.from_poly(vf.N)
    f_parts: dict[int, _Sym] = {d: _Sym.from_poly(f_top)}
    g_parts: dict[int, _Sym] = {m - 1: _Sym.from_poly(g_top)} if m >= 1 else {}
    cons: list[_Sym] = []
    nparam = 0

    def substitute(k: int, expr: _Sym):
        for parts in (f_parts, g_parts):
            for key in parts:
                parts[key] = parts[key].subs(k, expr)
        for idx in range(len(cons)):
            cons[idx] = cons[idx].subs(k, expr)

    for s in range(1, max(d, d + m - 1) + 1):
        t = d + m - 1 - s
        f_monos = _homogeneous_monomials(d - s) if d - s >= 0 else []
        g_monos = _homogeneous_monomials(m - 1 - s) if m - 1 - s >= 0 else []
        rows = _homogeneous_monomials(t) if t >= 0 else []

        F = _sum(f_parts.values())
        G = _sum(g_parts.values())
        K = (F.diff("x") * Nsym + F.diff("y") * Msym - G * F).homogeneous(t) if rows else _Sym()

        cols: list[Poly] = []
        for i, j in f_monos:
            mu = Poly.monomial(i, j)
            cols.append(apply_D(Dm, mu) - g_top * mu)
        for i, j in g_monos:
            cols.append(-(Poly.monomial(i, j) * f_top))
        A = [[col.coeff(i, j) for col in cols] for (i, j) in rows]
        rhs = [-K.coeff_at(i, j) for (i, j) in rows]
        R, T, pivots = rref_transform(A, len(cols))
        trhs = []
        for r in range(len(rows)):
            acc = _Sym()
            for k, v in enumerate(T[r]):
                if v and rhs[k]:
                    acc = acc + rhs[k].scale(v)
            trhs.append(acc)

        values: list[_Sym | None] = [None] * len(cols)
        free = [c for c in range(len(cols)) if c not in pivots]
        for c in free:
            values[c] = _Sym.param(nparam)
            nparam += 1
        for r, c in enumerate(pivots):
            v = trhs[r]
            for fc in free:
                if R[r][fc]:
                    v = v - values[fc].scale(R[r][fc])
            values[c] = v
        for r in range(len(pivots), len(rows)):
            cons.append(trhs[r])

        nf = len(f_monos)
        if f_monos:
            f_parts[d - s] = _sum(values[k] * _Sym.from_poly(Poly.monomial(*mu)) for k, mu in enumerate(f_monos))
        if g_monos:
            g_parts[m - 1 - s] = _sum(values[nf + k] * _Sym.from_poly(Poly.monomial(*nu)) for k, nu in enumerate(g_monos))

        # eager elimination keeps the parameter set small
        while True:
            cons = [c for c in cons if c]
            if any(not c.params() for c in cons):
                return []
            iso = next(((c, r) for c in cons for r in [_isolate(c)] if r), None)
            if iso is None:
                break
            c, (k, expr) = iso
            cons.remove(c)
            substitute(k, expr)

    F = _sum(f_parts.values())
    out = []
    for sol in _solve_constraints(cons):
        f = F
        for k, expr in sol.items():
            f = f.subs(k, expr)
        out.append(f.to_poly())
    return out


def _sum(items: Iterable[_Sym]) -> _Sym:
    acc = _Sym()
    for it in items:
        acc = acc + it
    return acc


def find_darboux(vf: VectorField, degree_bound: int = 3, hints: Sequence[Poly] = ()) -> list[DarbouxPair]:
    """Irreducible Darboux polynomials of total degree <= ``degree_bound``.

    Every returned pair is certified by exact division.  Reducible
    candidates are rejected by trial division against lower-degree
    results.  ``hints`` are certified and merged; uncertifiable hints are
    dropped with a warning.
    """
    if degree_bound < 1:
        raise ValueError("degree_bound must be >= 1")
    found: list[DarbouxPair] = []
    for d in range(1, degree_bound + 1):
        lower = [p.f for p in found]
        new: dict[Poly, DarbouxPair] = {}
        for top in top_candidates(vf, d):
            for f in _block_solve(vf, d, top):
                pair = certify(vf, f)
                if pair is None or pair.f in new:
                    continue
                if any(divides(q, pair.f) for q in lower):
                    continue
                new[pair.f] = pair
        found.extend(sorted(new.values(), key=lambda p: p.f.sort_key()))
    for h in hints:
        pair = certify(vf, h)
        if pair is None:
            log.warning("hint %s is not a Darboux polynomial of the field; ignored", h)
            continue
        if all(pair.f != p.f for p in found):
            found.append(pair)
    return sorted(found, key=lambda p: p.f.sort_key())


def brute_force_darboux(vf: VectorField, degree_bound: int, coeff_set: Iterable) -> list[DarbouxPair]:
    """Exhaustive oracle: every polynomial with coefficients from ``coeff_set``
    on the monomials of total degree <= ``degree_bound``, normalized and
    tested by exact division.  Reducible results are kept."""
    if degree_bound > 3:
        raise ValueError("brute force oracle is limited to degree_bound <= 3")
    coeffs = sorted({Fraction(c) for c in coeff_set})
    monos = [(i, k - i) for k in range(degree_bound + 1) for i in range(k, -1, -1)]
    seen: set[Poly] = set()
    out: list[DarbouxPair] = []
    for combo in itertools.product(coeffs, repeat=len(monos)):
        p = Poly(dict(zip(monos, combo)))
        if p.is_constant():
            continue
        p = p.monic()
        if p in seen:
            continue
        seen.add(p)
        pair = certify(vf, p)
        if pair is not None:
            out.append(pair)
    return sorted(out, key=lambda q: q.f.sort_key())
