"""Integrating factors of the form R = exp(r0) * prod p_i^c_i.

Taking the log-derivative along D turns the integrating-factor condition
into the polynomial identity

    D[r0] + sum_i c_i * g_i = -(dN/dx + dM/dy)

where ``g_i`` is the cofactor of ``p_i``.  The elementary branch fixes
r0 = 0.  The Liouvillian branch writes r0 = P/Q where Q runs over
products of Darboux polynomials and requires D[r0] to be a polynomial;
for each Q both requirements are linear in the coefficients of P and the
exponents c_i.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import ONE, ZERO, Poly, RationalFunction, divmod_poly, exact_div, fmt_rational, mono_key, rf_reduce
from .darboux import DarbouxPair, VectorField, apply_D
from .linalg import solve


@dataclass(frozen=True)
class IntegratingFactor:
    r0: RationalFunction = field(default_factory=lambda: RationalFunction(ZERO, ONE))
    factors: tuple[tuple[Poly, Fraction], ...] = ()

    def is_trivial(self) -> bool:
        return self.r0.is_zero() and not self.factors

    def render(self) -> str:
        """Text like ``exp(1/2*x^2 - 2*x) * (y + 1)^(-2)``."""
        parts = []
        if not self.r0.is_zero():
            parts.append(f"exp({self.r0})")
        for p, c in self.factors:
            if c == 1:
                parts.append(f"({p})")
            elif c.denominator == 1 and c > 0:
                parts.append(f"({p})^{c.numerator}")
            else:
                parts.append(f"({p})^({fmt_rational(c)})")
        return " * ".join(parts) if parts else "1"

    def __str__(self) -> str:
        return self.render()


def residual(vf: VectorField) -> Poly:
    return -(vf.N.diff("x") + vf.M.diff("y"))


def _coefficient_system(columns: Sequence[Poly], target: Poly) -> tuple[list[list[Fraction]], list[Fraction]]:
    monos = set(target.terms)
    for col in columns:
        monos.update(col.terms)
    rows = sorted(monos, key=mono_key, reverse=True)
    A = [[col.coeff(*m) for col in columns] for m in rows]
    b = [target.coeff(*m) for m in rows]
    return A, b


def solve_elementary(vf: VectorField, pairs: Sequence[DarbouxPair]) -> IntegratingFactor | None:
    """Rational exponents n_i with sum n_i g_i equal to the residual, or ``None``."""
    target = residual(vf)
    if not pairs:
        return IntegratingFactor() if target.is_zero() else None
    A, b = _coefficient_system([p.g for p in pairs], target)
    sol = solve(A, b, len(pairs))
    if sol is None:
        return None
    return IntegratingFactor(factors=tuple((p.f, n) for p, n in zip(pairs, sol) if n))


def enumerate_denominators(pairs: Sequence[DarbouxPair], mult_bound: int) -> list[Poly]:
    """Products of Darboux polynomials with multiplicities in [0, mult_bound].

    Ordered by total degree, ties broken by the monomial order.
    """
    if mult_bound < 0:
        raise ValueError("mult_bound must be >= 0")
    polys = [p.f for p in pairs]
    out = []
    for ks in itertools.product(range(mult_bound + 1), repeat=len(polys)):
        q = ONE
        for p, k in zip(polys, ks):
            q = q * p**k
        out.append(q.monic())
    unique = {q: None for q in out}
    return sorted(unique, key=Poly.sort_key)


def _log_derivative_of(Q: Poly, pairs: Sequence[DarbouxPair]) -> Poly:
    """D[Q]/Q for a product of Darboux polynomials, from the cofactors."""
    h = ZERO
    rest = Q
    for p in pairs:
        while not rest.is_constant():
            q, r = divmod_poly(rest, p.f)
            if r:
                break
            rest = q
            h = h + p.g
    assert rest.is_constant(), "denominator is not a product of the given Darboux polynomials"
    return h


def _monomials_upto(deg: int) -> list[tuple[int, int]]:
    return [(k - j, j) for k in range(deg + 1) for j in range(k + 1)]


def solve_liouvillian(
    vf: VectorField,
    pairs: Sequence[DarbouxPair],
    num_degree_bound: int = 4,
    mult_bound: int = 2,
) -> IntegratingFactor | None:
    """First solution over the denominator enumeration, or ``None``.

    For a denominator Q with D[Q] = h*Q, r0 = P/Q gives
    D[r0] = (D[P] - h*P)/Q.  Divisibility by Q is imposed through the
    remainder of each column (the remainder map is linear), and the
    quotient enters the log-derivative identity.  Exponent columns come
    first so that r0 = 0 is preferred when it suffices.
    """
    target = residual(vf)
    monos = _monomials_upto(num_degree_bound)
    for Q in enumerate_denominators(pairs, mult_bound):
        h = _log_derivative_of(Q, pairs)
        quots, rems = [], []
        for i, j in monos:
            mu = Poly.monomial(i, j)
            q, r = divmod_poly(apply_D(vf, mu) - h * mu, Q)
            quots.append(q)
            rems.append(r)
        ncols = len(pairs) + len(monos)
        A1, b1 = _coefficient_system([p.g for p in pairs] + quots, target)
        rem_monos = sorted({m for r in rems for m in r.terms}, key=mono_key, reverse=True)
        A2 = [[Fraction(0)] * len(pairs) + [r.coeff(*m) for r in rems] for m in rem_monos]
        sol = solve(A1 + A2, b1 + [Fraction(0)] * len(A2), ncols)
        if sol is None:
            continue
        cs, ps = sol[: len(pairs)], sol[len(pairs):]
        P = Poly({m: a for m, a in zip(monos, ps)})
        return IntegratingFactor(
            r0=_normalize_r0(P, Q),
            factors=tuple((p.f, c) for p, c in zip(pairs, cs) if c),
        )
    return None


def _normalize_r0(P: Poly, Q: Poly) -> RationalFunction:
    """Reduce P/Q and drop the additive constant.

    The constant is fixed by zeroing the numerator coefficient at the
    trailing monomial of the denominator (the constant term when Q = 1).
    """
    rf = rf_reduce(P, Q)
    if rf.is_zero():
        return rf
    m = rf.den.trailing_monomial()
    lam = rf.num.coeff(*m) / rf.den.coeff(*m)
    if lam:
        rf = rf_reduce(rf.num - rf.den * lam, rf.den)
    return rf


def log_derivative(vf: VectorField, R: IntegratingFactor, cofactors: Sequence[Poly]) -> Poly:
    """D[R]/R in structural form; D[r0] must divide exactly."""
    P, Q = R.r0.num, R.r0.den
    total = exact_div(Q * apply_D(vf, P) - P * apply_D(vf, Q), Q * Q)
    for (_, c), g in zip(R.factors, cofactors):
        total = total + g * c
    return total


def integrating_factor_value(R: IntegratingFactor, x: float, y: float) -> float:
    """R(x, y) with each p_i^c_i evaluated as |p_i|^c_i."""
    val = math.exp(float(R.r0.eval(x, y))) if not R.r0.is_zero() else 1.0
    for p, c in R.factors:
        val *= abs(p.eval(x, y)) ** float(c)
    return val
