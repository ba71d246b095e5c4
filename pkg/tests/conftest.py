import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from liouvif import Poly, VectorField, parse_ode, parse_poly

RATIONAL_ODE = "dy/dx = (3*x^2*y^2 + x^3 + 1) / (4*(x+1)*(x^2-x+1)*y)"
RICCATI_ODE = "dy/dx = y^2 + y*x + x - 1"


@pytest.fixture
def rational():
    return parse_ode(RATIONAL_ODE).field


@pytest.fixture
def riccati():
    return parse_ode(RICCATI_ODE).field


@pytest.fixture
def P():
    return parse_poly


def monomials(max_deg=4):
    return [(i, k - i) for k in range(max_deg + 1) for i in range(k + 1)]


# dense-ish small polynomials: degree <= 4, integer coefficients in [-9, 9]
polys = st.dictionaries(st.sampled_from(monomials()), st.integers(-9, 9), max_size=8).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def random_poly(rng: random.Random, max_deg=4, max_terms=8) -> Poly:
    mons = monomials(max_deg)
    k = rng.randint(0, max_terms)
    return Poly({rng.choice(mons): rng.randint(-9, 9) for _ in range(k)})


def random_field(rng: random.Random) -> VectorField:
    while True:
        M, N = random_poly(rng, 3, 5), random_poly(rng, 3, 5)
        if M or N:
            return VectorField(M, N)
