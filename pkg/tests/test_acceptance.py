"""Acceptance criteria, one PASS/FAIL line each (run with ``pytest -s`` to see them)."""

import random
import time
from fractions import Fraction

from liouvif.arith import ONE, Poly, RationalFunction, divides, exact_div
from liouvif.cli import Options, load_fixtures, run_pipeline
from liouvif.darboux import apply_D, brute_force_darboux, cofactor, find_darboux
from liouvif.parse import parse_ode, parse_poly
from liouvif.psengine import IntegratingFactor, solve_elementary, solve_liouvillian
from liouvif.verify import NumericCheckConfig, numeric_drift, verify_symbolic

from conftest import RATIONAL_ODE, RICCATI_ODE, random_field, random_poly

F = Fraction
P = parse_poly
CASES = 1000


def report(name: str, ok: bool, detail: str = "") -> None:
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
    assert ok, detail


def test_criterion_1_elementary_factor_defaults():
    t0 = time.perf_counter()
    rep = run_pipeline(Options(RATIONAL_ODE))
    elapsed = time.perf_counter() - t0
    want = IntegratingFactor(factors=((P("x + 1"), F(-3, 2)), (P("x^2 - x + 1"), F(-3, 2))))
    ok = rep.elementary == want and rep.symbolic == "pass" and elapsed < 5
    report("C1 elementary factor (x+1)^(-3/2)(x^2-x+1)^(-3/2)", ok,
           f"R = {rep.result.render() if rep.result else None}, {elapsed:.2f}s")


def test_criterion_2_liouvillian_factor():
    t0 = time.perf_counter()
    rep = run_pipeline(Options(RICCATI_ODE))
    elapsed = time.perf_counter() - t0
    R = rep.liouvillian
    ok = (rep.elementary is None and R is not None
          and R.r0 == RationalFunction(P("1/2*x^2 - 2*x"), ONE)
          and R.factors == ((P("y + 1"), F(-2)),)
          and rep.symbolic == "pass" and elapsed < 10)
    report("C2 elementary none, Liouvillian exp(x^2/2 - 2x)(y+1)^(-2)", ok,
           f"R = {R.render() if R else None}, {elapsed:.2f}s")


def test_criterion_3_every_success_verifies():
    checked, bad = 0, []
    for ode in load_fixtures():
        vf = parse_ode(ode).field
        pairs = find_darboux(vf, 3)
        for R in (solve_elementary(vf, pairs), solve_liouvillian(vf, pairs)):
            if R is None:
                continue
            checked += 1
            v = verify_symbolic(vf, R)
            Pn, Q = R.r0.num, R.r0.den
            divisible = divides(Q * Q, Q * apply_D(vf, Pn) - Pn * apply_D(vf, Q))
            if not (v.passed and v.difference.is_zero() and divisible):
                bad.append(ode)
    report("C3 symbolic verification on fixture corpus", checked > 0 and not bad,
           f"{checked} factors checked, failures: {bad}")


GRID = range(-2, 3)


def _on_grid(f: Poly) -> bool:
    return any(all(t * c in GRID for _, c in f.items()) for t in (1, 2, -1, -2))


def _irreducible_only(pairs):
    fs = [p.f for p in pairs]
    return {f for f in fs if not any(g != f and g.degree() < f.degree() and divides(g, f) for g in fs)}


def test_criterion_4_brute_force_agreement():
    t0 = time.perf_counter()
    lines = []
    ok = True
    for name, ode in (("rational", RATIONAL_ODE), ("Riccati", RICCATI_ODE)):
        vf = parse_ode(ode).field
        for bound in (1, 2):
            brute = _irreducible_only(brute_force_darboux(vf, bound, GRID))
            found = {p.f for p in find_darboux(vf, bound) if _on_grid(p.f)}
            ok &= brute == found
            lines.append(f"{name} d<={bound}: {sorted(map(str, found))}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    report("C4 brute force vs search agreement", ok, "; ".join(lines) + f"; {elapsed:.1f}s")


def _drift_ok(vf, R, start, end):
    d = numeric_drift(vf, R, NumericCheckConfig(start[0], start[1], end, F(1, 1000)))
    ratios = []
    step = F(1, 8)
    prev = numeric_drift(vf, R, NumericCheckConfig(start[0], start[1], end, step))
    while prev >= 1e-12 and step > F(1, 4096):
        step /= 2
        cur = numeric_drift(vf, R, NumericCheckConfig(start[0], start[1], end, step))
        ratios.append(prev / cur if cur else float("inf"))
        prev = cur
    return d < 1e-6 and prev < 1e-12 and all(r >= 8 for r in ratios), d, ratios


def test_criterion_5_numeric_drift():
    rr = IntegratingFactor(factors=((P("x + 1"), F(-3, 2)), (P("x^2 - x + 1"), F(-3, 2))))
    rq = IntegratingFactor(RationalFunction(P("1/2*x^2 - 2*x"), ONE), ((P("y + 1"), F(-2)),))
    okr, dr, qr = _drift_ok(parse_ode(RATIONAL_ODE).field, rr, (F(1), F(1)), F(2))
    okq, dq, qq = _drift_ok(parse_ode(RICCATI_ODE).field, rq, (F(0), F(0)), F(1))
    fmt = lambda q: ", ".join(f"{r:.1f}" for r in q)
    report("C5 RK4 drift and 4th-order convergence", okr and okq,
           f"rational drift {dr:.2e} ratios [{fmt(qr)}]; Riccati drift {dq:.2e} ratios [{fmt(qq)}]")


def test_criterion_6_property_suites():
    rng = random.Random(20261016)
    failures = {"ring": 0, "leibniz": 0, "exact_div": 0, "round_trip": 0}
    zero, one = Poly({}), ONE
    for _ in range(CASES):
        a, b, c = (random_poly(rng) for _ in range(3))
        ring = (a + b == b + a and a * b == b * a and (a + b) + c == a + (b + c)
                and (a * b) * c == a * (b * c) and a * (b + c) == a * b + a * c
                and a + zero == a and a * one == a and a - a == zero)
        failures["ring"] += not ring
    for _ in range(CASES):
        vf, p, q = random_field(rng), random_poly(rng), random_poly(rng)
        failures["leibniz"] += apply_D(vf, p * q) != apply_D(vf, p) * q + p * apply_D(vf, q)
    for _ in range(CASES):
        a, b = random_poly(rng), random_poly(rng)
        if b.is_zero():
            b = one
        failures["exact_div"] += exact_div(a * b, b) != a
    for _ in range(CASES):
        a = random_poly(rng)
        failures["round_trip"] += parse_poly(str(a)) != a
    report(f"C6 property suites ({CASES} cases each)", not any(failures.values()), f"failures {failures}")
