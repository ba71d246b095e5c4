from fractions import Fraction

import pytest

from liouvif.arith import ONE, ZERO, Poly, RationalFunction, exact_div, rf_reduce
from liouvif.darboux import DarbouxPair, VectorField, apply_D, cofactor, find_darboux
from liouvif.parse import parse_ode, parse_poly
from liouvif.psengine import (IntegratingFactor, enumerate_denominators, log_derivative, residual, solve_elementary,
                              solve_liouvillian)

P = parse_poly
F = Fraction


def pair(vf, text):
    f = P(text)
    return DarbouxPair(f, cofactor(vf, f))


def test_residual_examples(rational, riccati):
    assert residual(rational) == P("-18*x^2*y")
    assert residual(riccati) == P("-(2*y+x)")
    assert residual(VectorField(ONE, ONE)) == ZERO


def test_elementary_rational(rational):
    R = solve_elementary(rational, [pair(rational, "x+1"), pair(rational, "x^2-x+1")])
    assert R.r0.is_zero()
    assert R.factors == ((P("x+1"), F(-3, 2)), (P("x^2-x+1"), F(-3, 2)))
    assert R.render() == "(x + 1)^(-3/2) * (x^2 - x + 1)^(-3/2)"


def test_elementary_riccati_has_no_solution(riccati):
    assert solve_elementary(riccati, [pair(riccati, "y+1")]) is None


def test_elementary_exact_form():
    vf = VectorField(P("-x"), P("y"))
    R = solve_elementary(vf, [])
    assert R.is_trivial() and R.render() == "1"


def test_enumerate_denominators(rational, riccati):
    assert enumerate_denominators([pair(riccati, "y+1")], 2) == [ONE, P("y+1"), P("(y+1)^2")]
    assert enumerate_denominators([pair(rational, "x+1"), pair(rational, "x^2-x+1")], 1) == [
        ONE, P("x+1"), P("x^2-x+1"), P("x^3+1")]
    assert enumerate_denominators([], 3) == [ONE]
    with pytest.raises(ValueError):
        enumerate_denominators([], -1)


def test_liouvillian_riccati(riccati):
    R = solve_liouvillian(riccati, [pair(riccati, "y+1")], 2, 2)
    assert R.r0 == RationalFunction(P("x^2/2 - 2*x"), ONE)
    assert R.factors == ((P("y+1"), F(-2)),)
    assert R.render() == "exp(1/2*x^2 - 2*x) * (y + 1)^(-2)"


def test_liouvillian_rational_reduces_to_elementary(rational):
    R = solve_liouvillian(rational, [pair(rational, "x+1"), pair(rational, "x^2-x+1")])
    assert R.r0.is_zero()
    assert [c for _, c in R.factors] == [F(-3, 2), F(-3, 2)]


def test_liouvillian_exact_form():
    R = solve_liouvillian(VectorField(P("x"), P("y")), [])
    assert R.is_trivial()


def test_liouvillian_with_denominator():
    # y' = (y + x^2)/x^2 has R = exp(1/x)/x^2; Q = 1 is infeasible
    vf = parse_ode("dy/dx = (y + x^2)/x^2").field
    R = solve_liouvillian(vf, [pair(vf, "x")])
    assert R.r0 == rf_reduce(ONE, P("x"))
    assert R.factors == ((P("x"), F(-2)),)


def test_liouvillian_no_darboux():
    vf = parse_ode("dy/dx = 2*x*y + 1").field
    R = solve_liouvillian(vf, [])
    assert R.r0 == RationalFunction(P("-x^2"), ONE) and R.factors == ()


def test_liouvillian_no_solution():
    vf = parse_ode("dy/dx = y^2 + x").field
    assert solve_liouvillian(vf, find_darboux(vf, 2)) is None


CORPUS = [
    "dy/dx = (3*x^2*y^2 + x^3 + 1) / (4*(x+1)*(x^2-x+1)*y)",
    "dy/dx = y^2 + y*x + x - 1",
    "dy/dx = x/y",
    "dy/dx = x*y",
    "dy/dx = x + y",
    "dy/dx = 2*x*y + 1",
    "dy/dx = (y + x^2)/x^2",
    "dy/dx = (x^2 + y)/(x*y + 1)",
    "dy/dx = (y^2 - 1)/(x^2 + 1)",
]


@pytest.mark.parametrize("ode", CORPUS)
def test_solver_invariants(ode):
    vf = parse_ode(ode).field
    pairs = find_darboux(vf, 2)
    cofs = {p.f: p.g for p in pairs}
    elem = solve_elementary(vf, pairs)
    liou = solve_liouvillian(vf, pairs, 3, 2)
    for R in (elem, liou):
        if R is None:
            continue
        # log-derivative identity and D[r0] polynomial
        assert log_derivative(vf, R, [cofs[p] for p, _ in R.factors]) == residual(vf)
        P_, Q = R.r0.num, R.r0.den
        exact_div(Q * apply_D(vf, P_) - P_ * apply_D(vf, Q), Q * Q)
        # r0 normalized: no additive constant, reduced
        assert R.r0.num.coeff(*R.r0.den.trailing_monomial()) == 0 or R.r0.is_zero()
        # a constant shift of r0 leaves the identity exact
        shifted = IntegratingFactor(rf_reduce(P_ + Q * 5, Q), R.factors)
        assert log_derivative(vf, shifted, [cofs[p] for p, _ in R.factors]) == residual(vf)
    if elem is not None:
        # branch consistency
        assert liou is not None
        lhs = log_derivative(vf, liou, [cofs[p] for p, _ in liou.factors])
        assert lhs == log_derivative(vf, elem, [cofs[p] for p, _ in elem.factors])
