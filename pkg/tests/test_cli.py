import json

import pytest

from liouvif.cli import Options, emit_report, load_fixtures, main, run_pipeline
from liouvif.parse import parse_poly

from conftest import RATIONAL_ODE, RICCATI_ODE


def test_pipeline_rational():
    rep = run_pipeline(Options(RATIONAL_ODE))
    assert rep.elementary is not None and not rep.liouvillian_ran
    text = emit_report(rep)
    assert "R = (x + 1)^(-3/2) * (x^2 - x + 1)^(-3/2)" in text.splitlines()


def test_pipeline_riccati_json():
    rep = run_pipeline(Options(RICCATI_ODE))
    d = json.loads(emit_report(rep, "json"))
    assert d["elementary"]["status"] == "no_solution"
    assert d["liouvillian"] == {"status": "found", "r0": "1/2*x^2 - 2*x", "factors": [["y + 1", "-2"]]}
    assert d["verification"]["symbolic"] == "pass"
    assert list(d) == ["ode", "degree_bound", "num_degree_bound", "mult_bound", "darboux", "elementary",
                       "liouvillian", "verification", "timings"]


def test_pipeline_exact_form():
    rep = run_pipeline(Options("dy/dx = x/y", force_liouvillian=True))
    assert rep.elementary.is_trivial() and rep.liouvillian.is_trivial()
    assert "R = 1" in emit_report(rep)


def test_empty_darboux_set():
    d = json.loads(emit_report(run_pipeline(Options("dy/dx = 2*x*y + 1")), "json"))
    assert d["darboux"] == []


def test_json_polys_round_trip():
    for ode in load_fixtures():
        d = json.loads(emit_report(run_pipeline(Options(ode, force_liouvillian=True)), "json"))
        texts = [d["ode"]["M"], d["ode"]["N"]]
        texts += [v for p in d["darboux"] for v in p.values()]
        texts += [f[0] for br in ("elementary", "liouvillian") for f in d[br]["factors"]]
        for t in texts:
            assert str(parse_poly(t)) == t


def test_json_is_byte_stable(capsys):
    main(["--ode", RICCATI_ODE, "--json", "--numeric", "--from", "0,0", "--to", "1"])
    first = capsys.readouterr().out
    main(["--ode", RICCATI_ODE, "--json", "--numeric", "--from", "0,0", "--to", "1"])
    assert capsys.readouterr().out == first
    assert json.loads(first)["verification"]["numeric_drift"] < 1e-6


def test_timings_flag(capsys):
    main(["--ode", RATIONAL_ODE, "--json", "--timings"])
    t = json.loads(capsys.readouterr().out)["timings"]
    assert all(isinstance(v, float) for k, v in t.items() if k != "liouvillian_ms")


@pytest.mark.parametrize("argv, code", [
    (["--ode", RATIONAL_ODE], 0),
    (["--ode", RICCATI_ODE], 0),
    (["--ode", "dy/dx = y^2 + x"], 1),
    (["--ode", "dy/dx = x^(1/2)"], 2),
    (["--ode", "dy/dx = 1/(x - x)"], 2),
    (["--ode", RATIONAL_ODE, "--degree-bound", "0"], 2),
    (["--fixtures"], 0),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code


def test_hint_flag(capsys):
    main(["--ode", "dy/dx = y/x", "--degree-bound", "1", "--hint", "x + 3*y", "--json"])
    d = json.loads(capsys.readouterr().out)
    assert {"poly": "x + 3*y", "cofactor": "1"} in d["darboux"]


def test_fixture_file(tmp_path, capsys):
    f = tmp_path / "odes.txt"
    f.write_text("# comment\n\ndy/dx = x*y  # trailing comment\n")
    assert main(["--fixtures", str(f), "--json"]) == 0
    assert len(json.loads(capsys.readouterr().out)) == 1
