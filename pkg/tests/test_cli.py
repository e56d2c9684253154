import json

import numpy as np
import pytest

from dkfield.cli import main
from dkfield.dynamics import random_onshell_field


def test_verify_algebra(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "algebra", "--seed", "1", "--trials", "1000", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["passed"] and all(c["max_residual"] < 1e-12 for c in rep["checks"])
    assert "elapsed_ms" in rep["checks"][0]


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_verify_duality_chi():
    assert main(["verify", "duality", "--chi", "0.7", "--out", "-"]) == 0


def test_verify_failure_exit_code(capsys):
    # an absurdly strict override makes the Lorentz suite fail
    assert main(["verify", "lorentz", "--trials", "3", "--tolerance", "1e-300"]) == 1


def test_verify_report_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["verify", "roundtrip", "--seed", "3", "--no-timing", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_duality_command(capsys):
    assert main(["duality", "--chi", "0.7"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["max_residual"] < 1e-10


@pytest.fixture
def onshell_spec(tmp_path):
    f = random_onshell_field(1.0, np.random.default_rng(0))
    p = tmp_path / "field.json"
    p.write_text(json.dumps(f.to_json()))
    return p


def test_residual_onshell(onshell_spec, tmp_path):
    out = tmp_path / "r.csv"
    assert main(["residual", str(onshell_spec), "--system", "dk", "--mass", "1", "--points", "5", "--out", str(out), "--tolerance", "1e-10"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "point,x0,x1,x2,x3,equation,residual"
    assert len(lines) == 1 + 5 * 16
    assert max(float(l.split(",")[-1]) for l in lines[1:]) < 1e-10


def test_residual_offshell_fails_tolerance(onshell_spec, tmp_path):
    assert main(["residual", str(onshell_spec), "--mass", "2.0", "--tolerance", "1e-10", "--out", str(tmp_path / "x.csv")]) == 1


@pytest.mark.parametrize("system", ["proca", "pseudoproca", "maxwell", "pseudomaxwell", "extended"])
def test_residual_empty_spec_all_zero(tmp_path, capsys, system):
    p = tmp_path / "empty.json"
    p.write_text("[]")
    assert main(["residual", str(p), "--system", system, "--points", "2"]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert rows and all(float(r.split(",")[-1]) == 0.0 for r in rows)


def test_residual_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('[{"k": [1, 0, 0, 0],\n  "polarization": }]')
    assert main(["residual", str(p)]) == 2
    err = capsys.readouterr().err
    assert "line 2" in err and "column" in err


def test_residual_missing_file(capsys):
    assert main(["residual", "/nonexistent/field.json"]) == 2


def test_residual_proca_needs_mass(onshell_spec):
    assert main(["residual", str(onshell_spec), "--system", "proca", "--mass", "0"]) == 2


def write_cfg(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return p


def test_simulate_cfl_violation(tmp_path, capsys):
    p = write_cfg(tmp_path, {"grid": {"n": [4, 4, 4], "h": 0.1}, "dt": 0.1, "steps": 2})
    assert main(["simulate", str(p), "--out", str(tmp_path / "o")]) == 2
    err = capsys.readouterr().err
    assert "0.0577350269" in err
    assert not (tmp_path / "o" / "diagnostics.csv").exists()


def test_simulate_zero(tmp_path):
    p = write_cfg(tmp_path, {"grid": {"n": [4, 4, 4], "h": 0.25}, "steps": 4, "initial": "zero"})
    assert main(["simulate", "--config", str(p), "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "diagnostics.csv").read_text().splitlines()
    assert rows[0] == "step,energy,max_divE_minus_rho,max_divB_plus_rhomag"
    assert rows[1:] == [f"{i},0.0,0.0,0.0" for i in range(5)]


def test_simulate_deterministic_with_fields(tmp_path):
    cfg = {"grid": {"n": [6, 6, 6], "h": 1 / 6}, "steps": 5, "initial": {"type": "planewave", "axis": "y", "polarization": "z"}, "outputs": ["energy", "gauss", "fields"]}
    p = write_cfg(tmp_path, cfg)
    assert main(["simulate", str(p), "--out", str(tmp_path / "a")]) == 0
    assert main(["simulate", str(p), "--out", str(tmp_path / "b")]) == 0
    for name in ("diagnostics.csv", "fields.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    header = (tmp_path / "a" / "fields.csv").read_text().splitlines()[0]
    assert header == "step,i,j,k,Ex,Ey,Ez,Bx,By,Bz"


def test_simulate_bad_threads(tmp_path, monkeypatch):
    p = write_cfg(tmp_path, {"grid": {"n": [4, 4, 4], "h": 0.25}, "steps": 1})
    monkeypatch.setenv("DKFIELD_THREADS", "many")
    assert main(["simulate", str(p), "--out", str(tmp_path)]) == 2


def test_simulate_malformed_config(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{")
    assert main(["simulate", str(p)]) == 2
    p = write_cfg(tmp_path, {"grid": {"n": [4, 4, 4]}})
    assert main(["simulate", str(p)]) == 2
