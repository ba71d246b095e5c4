"""Independent checks of integrating factors.

``verify_symbolic`` recomputes every cofactor and D[r0] from scratch and
compares the log-derivative identity exactly.  ``numeric_drift`` measures
how far a numerically integrated solution curve strays from a level set
of the first integral defined by R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import ZERO, DoesNotDivide, Poly, exact_div
from .darboux import NotDarboux, VectorField, apply_D, cofactor
from .psengine import IntegratingFactor, integrating_factor_value, residual


class Singularity(ArithmeticError):
    """The path came too close to a zero of N or of a factor p_i."""


class NonFinite(ArithmeticError):
    """A numeric evaluation overflowed or produced NaN."""


@dataclass(frozen=True)
class VerifyReport:
    passed: bool
    difference: Poly
    derivative_is_polynomial: bool
    message: str = ""


def verify_symbolic(vf: VectorField, R: IntegratingFactor) -> VerifyReport:
    """Exact check of D[r0] + sum c_i g_i == -(N_x + M_y).

    ``difference`` is the residual minus the left-hand side; it is zero
    exactly when R is an integrating factor.
    """
    P, Q = R.r0.num, R.r0.den
    try:
        d_r0 = exact_div(Q * apply_D(vf, P) - P * apply_D(vf, Q), Q * Q)
    except DoesNotDivide:
        return VerifyReport(False, ZERO, False, "D[r0] is not a polynomial")
    lhs = d_r0
    for p, c in R.factors:
        try:
            g = cofactor(vf, p)
        except (NotDarboux, ValueError):
            return VerifyReport(False, ZERO, True, f"{p} is not a Darboux polynomial")
        lhs = lhs + g * c
    diff = residual(vf) - lhs
    if diff:
        return VerifyReport(False, diff, True, f"identity fails by {diff}")
    return VerifyReport(True, diff, True)


@dataclass(frozen=True)
class NumericCheckConfig:
    x_start: Fraction
    y_start: Fraction
    x_end: Fraction
    step: Fraction = Fraction(1, 1000)
    drift_tolerance: float = 1e-6

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.x_start == self.x_end:
            raise ValueError("x_start and x_end must differ")


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)
SINGULAR_TOL = 1e-8


def _float_eval(terms, x: float, y: float) -> float:
    return sum(c * x**i * y**j for i, j, c in terms)


def numeric_drift(vf: VectorField, R: IntegratingFactor, cfg: NumericCheckConfig, scale: float = 1.0) -> float:
    """Drift of the first integral along an RK4 solution curve.

    The ODE is integrated with classical RK4 from ``(x_start, y_start)``
    to ``x_end``.  Because R*(M dx - N dy) is closed, the change of the
    first integral between the two end points equals the line integral of
    that form along the straight segment joining them, computed here with
    64-point Gauss-Legendre quadrature.  The form vanishes identically on
    solution curves, so integrating it along the computed curve itself
    would not depend on R; the segment does.  Returns the absolute value,
    which is O(step^4) for a true integrating factor.  ``scale`` multiplies
    R by a constant.
    """
    M, N = vf.M.float_terms(), vf.N.float_terms()
    guards = [N] + [p.float_terms() for p, _ in R.factors]

    def check(x: float, y: float):
        if not (math.isfinite(x) and math.isfinite(y)):
            raise NonFinite(f"non-finite point ({x}, {y})")
        for g in guards:
            if abs(_float_eval(g, x, y)) < SINGULAR_TOL:
                raise Singularity(f"path meets a singular curve near ({x:.6g}, {y:.6g})")

    def slope(x: float, y: float) -> float:
        check(x, y)
        return _float_eval(M, x, y) / _float_eval(N, x, y)

    x0, y0, x1 = float(cfg.x_start), float(cfg.y_start), float(cfg.x_end)
    n = max(1, math.ceil(abs(Fraction(cfg.x_end) - Fraction(cfg.x_start)) / Fraction(cfg.step)))
    h = (x1 - x0) / n
    x, y = x0, y0
    for k in range(n):
        k1 = slope(x, y)
        k2 = slope(x + h / 2, y + h / 2 * k1)
        k3 = slope(x + h / 2, y + h / 2 * k2)
        k4 = slope(x + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        x = x0 + (k + 1) * h
    check(x, y)

    dx, dy = x - x0, y - y0
    total = 0.0
    for node, w in zip(_GL_NODES, _GL_WEIGHTS):
        t = (node + 1) / 2
        px, py = x0 + t * dx, y0 + t * dy
        check(px, py)
        r = integrating_factor_value(R, px, py)
        total += w / 2 * r * (_float_eval(M, px, py) * dx - _float_eval(N, px, py) * dy)
    total *= scale
    if not math.isfinite(total):
        raise NonFinite("line integral overflowed")
    return abs(total)


def finite_diff_D(vf: VectorField, p: Poly, point: tuple, h: float = 1e-5) -> float:
    """N * dp/dx + M * dp/dy at ``point`` from central differences."""
    x, y = float(point[0]), float(point[1])
    terms = p.float_terms()
    px = (_float_eval(terms, x + h, y) - _float_eval(terms, x - h, y)) / (2 * h)
    py = (_float_eval(terms, x, y + h) - _float_eval(terms, x, y - h)) / (2 * h)
    return _float_eval(vf.N.float_terms(), x, y) * px + _float_eval(vf.M.float_terms(), x, y) * py
