"""Command-line front end.

Exit status: 0 when an integrating factor was found, 1 when neither
branch found one, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Sequence

from .arith import fmt_rational
from .darboux import DarbouxPair, find_darboux
from .parse import OdeSpec, ParseError, ZeroDenominator, parse_ode, parse_poly
from .psengine import IntegratingFactor, solve_elementary, solve_liouvillian
from .verify import NonFinite, NumericCheckConfig, Singularity, numeric_drift, verify_symbolic

log = logging.getLogger("liouvif")

EXIT_FOUND, EXIT_NO_SOLUTION, EXIT_INPUT_ERROR = 0, 1, 2


@dataclass
class Options:
    ode: str
    degree_bound: int = 3
    num_degree_bound: int = 4
    mult_bound: int = 2
    hints: Sequence[str] = ()
    force_liouvillian: bool = False
    numeric: bool = False
    start: tuple[Fraction, Fraction] = (Fraction(1), Fraction(1))
    end: Fraction = Fraction(2)
    step: Fraction = Fraction(1, 1000)
    timings: bool = False


@dataclass
class RunReport:
    ode: OdeSpec
    degree_bound: int
    num_degree_bound: int
    mult_bound: int
    darboux: list[DarbouxPair]
    elementary: IntegratingFactor | None
    liouvillian: IntegratingFactor | None
    liouvillian_ran: bool
    symbolic: str
    numeric_drift: float | None
    timings: dict[str, float | None] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.elementary is not None or self.liouvillian is not None

    @property
    def result(self) -> IntegratingFactor | None:
        return self.liouvillian if self.liouvillian is not None else self.elementary

    def to_dict(self) -> dict:
        def factors(R):
            return [[str(p), fmt_rational(c)] for p, c in R.factors] if R else []

        if not self.liouvillian_ran:
            liou = {"status": "skipped", "r0": None, "factors": []}
        elif self.liouvillian is None:
            liou = {"status": "no_solution", "r0": None, "factors": []}
        else:
            liou = {"status": "found", "r0": str(self.liouvillian.r0), "factors": factors(self.liouvillian)}
        return {
            "ode": {"source": self.ode.source_text, "M": str(self.ode.M), "N": str(self.ode.N)},
            "degree_bound": self.degree_bound,
            "num_degree_bound": self.num_degree_bound,
            "mult_bound": self.mult_bound,
            "darboux": [{"poly": str(p.f), "cofactor": str(p.g)} for p in self.darboux],
            "elementary": {
                "status": "found" if self.elementary is not None else "no_solution",
                "factors": factors(self.elementary),
            },
            "liouvillian": liou,
            "verification": {"symbolic": self.symbolic, "numeric_drift": self.numeric_drift},
            "timings": self.timings,
        }


def _timed(timings: dict, key: str, enabled: bool, fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    timings[key] = round((time.perf_counter() - t0) * 1000, 3) if enabled else None
    return out


def run_pipeline(opts: Options) -> RunReport:
    spec = parse_ode(opts.ode)
    if spec.reduced:
        log.warning("common factor of M and N cancelled: dy/dx = (%s)/(%s)", spec.M, spec.N)
    vf = spec.field
    hints = [parse_poly(h) for h in opts.hints]
    timings: dict[str, float | None] = {}
    pairs = _timed(timings, "darboux_ms", opts.timings, find_darboux, vf, opts.degree_bound, hints)
    elem = _timed(timings, "elementary_ms", opts.timings, solve_elementary, vf, pairs)
    run_liou = elem is None or opts.force_liouvillian
    liou = None
    if run_liou:
        liou = _timed(timings, "liouvillian_ms", opts.timings, solve_liouvillian, vf, pairs,
                      opts.num_degree_bound, opts.mult_bound)
    else:
        timings["liouvillian_ms"] = None

    results = [R for R in (elem, liou) if R is not None]
    t0 = time.perf_counter()
    if results:
        symbolic = "pass" if all(verify_symbolic(vf, R).passed for R in results) else "fail"
    else:
        symbolic = "n/a"
    drift = None
    if opts.numeric and results:
        cfg = NumericCheckConfig(opts.start[0], opts.start[1], opts.end, opts.step)
        try:
            drift = numeric_drift(vf, results[-1], cfg)
        except (Singularity, NonFinite) as exc:
            log.warning("numeric check skipped: %s", exc)
    timings["verify_ms"] = round((time.perf_counter() - t0) * 1000, 3) if opts.timings else None

    return RunReport(spec, opts.degree_bound, opts.num_degree_bound, opts.mult_bound, pairs,
                     elem, liou, run_liou, symbolic, drift, timings)


def emit_report(report: RunReport, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2)
    lines = [
        f"ODE: {report.ode.source_text}",
        f"  M = {report.ode.M}",
        f"  N = {report.ode.N}",
        f"Darboux polynomials (degree <= {report.degree_bound}):",
    ]
    lines += [f"  {p.f}    [cofactor {p.g}]" for p in report.darboux] or ["  none"]
    lines.append("Elementary branch: " + ("found" if report.elementary is not None else "no solution"))
    if not report.liouvillian_ran:
        lines.append("Liouvillian branch: skipped")
    else:
        lines.append("Liouvillian branch: " + ("found" if report.liouvillian is not None else "no solution"))
    if report.result is not None:
        lines.append(f"R = {report.result.render()}")
    lines.append(f"Symbolic verification: {report.symbolic}")
    if report.numeric_drift is not None:
        lines.append(f"Numeric drift: {report.numeric_drift:.3e}")
    return "\n".join(lines)


def load_fixtures(path: str | None = None) -> list[str]:
    if path is None:
        text = resources.files("liouvif").joinpath("fixtures.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _point(text: str) -> tuple[Fraction, Fraction]:
    try:
        a, b = text.split(",")
        return Fraction(a.strip()), Fraction(b.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="liouvif", description="Find Liouvillian integrating factors of dy/dx = M/N.")
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--ode", help='e.g. "dy/dx = y^2 + y*x + x - 1"')
    src.add_argument("--fixtures", nargs="?", const="", metavar="FILE",
                     help="run every ODE in FILE (default: the bundled corpus)")
    ap.add_argument("--degree-bound", type=int, default=3)
    ap.add_argument("--num-degree-bound", type=int, default=4)
    ap.add_argument("--mult-bound", type=int, default=2)
    ap.add_argument("--hint", action="append", default=[], metavar="POLY",
                    help="candidate Darboux polynomial, certified before use (repeatable)")
    ap.add_argument("--force-liouvillian", action="store_true")
    ap.add_argument("--numeric", action="store_true", help="also run the RK4 drift check")
    ap.add_argument("--from", dest="start", type=_point, default=(Fraction(1), Fraction(1)), metavar="X,Y")
    ap.add_argument("--to", dest="end", type=_fraction, default=Fraction(2), metavar="X")
    ap.add_argument("--step", type=_fraction, default=Fraction(1, 1000))
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--timings", action="store_true", help="record per-stage milliseconds (breaks byte-stable output)")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    for name in ("degree_bound", "num_degree_bound", "mult_bound"):
        if getattr(args, name) < (1 if name == "degree_bound" else 0):
            print(f"error: --{name.replace('_', '-')} out of range", file=sys.stderr)
            return EXIT_INPUT_ERROR
    if args.step <= 0:
        print("error: --step must be positive", file=sys.stderr)
        return EXIT_INPUT_ERROR
    fmt = "json" if args.json else "text"

    def options(ode: str) -> Options:
        return Options(ode, args.degree_bound, args.num_degree_bound, args.mult_bound, args.hint,
                       args.force_liouvillian, args.numeric, args.start, args.end, args.step, args.timings)

    try:
        odes = [args.ode] if args.ode is not None else load_fixtures(args.fixtures or None)
        reports = [run_pipeline(options(ode)) for ode in odes]
    except (ParseError, ZeroDenominator, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    if args.ode is not None:
        print(emit_report(reports[0], fmt))
    elif fmt == "json":
        print(json.dumps([r.to_dict() for r in reports], indent=2))
    else:
        print("\n\n".join(emit_report(r) for r in reports))
    return EXIT_FOUND if all(r.found for r in reports) else EXIT_NO_SOLUTION


if __name__ == "__main__":
    sys.exit(main())
