"""Liouvillian integrating factors for dy/dx = M(x, y)/N(x, y)."""

from .arith import DoesNotDivide, Poly, RationalFunction, exact_div, gcd, rf_reduce
from .darboux import DarbouxPair, NotDarboux, VectorField, apply_D, brute_force_darboux, cofactor, find_darboux
from .parse import OdeSpec, ParseError, ZeroDenominator, parse_ode, parse_poly
from .psengine import IntegratingFactor, enumerate_denominators, residual, solve_elementary, solve_liouvillian
from .verify import NumericCheckConfig, finite_diff_D, numeric_drift, verify_symbolic

__all__ = [
    "DarbouxPair", "DoesNotDivide", "IntegratingFactor", "NotDarboux", "NumericCheckConfig", "OdeSpec",
    "ParseError", "Poly", "RationalFunction", "VectorField", "ZeroDenominator", "apply_D",
    "brute_force_darboux", "cofactor", "enumerate_denominators", "exact_div", "finite_diff_D",
    "find_darboux", "gcd", "numeric_drift", "parse_ode", "parse_poly", "residual", "rf_reduce",
    "solve_elementary", "solve_liouvillian", "verify_symbolic",
]
