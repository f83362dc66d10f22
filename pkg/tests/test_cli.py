import json
import subprocess
import sys

import pytest

from natanzon.cli import dumps, main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_pt551(capsys):
    code, out, _ = run(["spectrum", "--pt", "5.5,1"], capsys)
    assert code == 0
    assert [s["E"] for s in json.loads(out)["states"]] == [-20.25, -6.25, -0.25]


def test_output_is_deterministic(capsys):
    _, a, _ = run(["spectrum", "--pt", "4,2,shifted"], capsys)
    _, b, _ = run(["spectrum", "--pt", "4,2,shifted"], capsys)
    assert a == b


def test_scatter_poles(capsys):
    code, out, _ = run(["scatter", "--m", "2", "--poles", "--pt", "4,1"], capsys)
    data = json.loads(out)
    assert code == 0
    assert [(p["lambda_im"], p["E"]) for p in data["poles"]] == [(1.0, -1.0), (3.0, -9.0)]


def test_scatter_grid_csv(capsys):
    code, out, _ = run(["scatter", "--m", "1", "--pt", "4,1", "--lambda-grid", "2:2:1", "--format", "csv"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "lambda,Re R,Im R,|R|"
    lam, re, im, mag = (float(x) for x in lines[1].split(","))
    assert (lam, mag) == (2.0, 1.0)
    assert complex(re, im) == pytest.approx(complex(-0.6, -0.8), abs=1e-12)


@pytest.mark.parametrize("args", [
    ["spectrum"],
    ["spectrum", "--pt", "4,x"],
    ["spectrum", "--pt", "1,2"],
    ["wavefunction", "--pt", "4,1", "--nu", "5"],
    ["satellite", "--pt", "3,0.5"],
    ["nonsense"],
])
def test_config_errors_exit_2(args, capsys):
    code, out, err = run(args, capsys)
    assert code == 2 and out == ""
    payload = json.loads(err)
    assert set(payload) == {"error", "message"}


def test_params_file_and_round_trip(tmp_path, capsys):
    pfile = tmp_path / "p.json"
    pfile.write_text(json.dumps({"f": 30.0, "h0": 2.0, "h1": -1.0, "a": 1.0, "c0": 1.0, "c1": 1.0}))
    sfile = tmp_path / "s.json"
    assert main(["spectrum", "--params", str(pfile), "--out", str(sfile)]) == 0
    code, out, _ = run(["wavefunction", "--params", str(pfile), "--nu", "1", "--states", str(sfile),
                        "--n-points", "1500"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["form"] == "derived" and len(data["r"]) == len(data["phi"]) == 1500
    # a tampered energy is caught
    states = json.loads(sfile.read_text())
    states["states"][0]["E"] += 1e-9
    sfile.write_text(json.dumps(states))
    code, _, err = run(["wavefunction", "--params", str(pfile), "--nu", "1", "--states", str(sfile)], capsys)
    assert code == 2 and "differs" in json.loads(err)["message"]


def test_grid_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("NATANZON_GRID_N", "300")
    _, out, _ = run(["potential", "--pt", "4,1"], capsys)
    assert len(json.loads(out)["r"]) in (299, 300)


def test_dumps_rounds_and_encodes_complex():
    text = dumps({"b": 0.1 + 0.2, "a": complex(1.0, -2.0), "c": -0.0})
    assert json.loads(text) == {"b": 0.3, "a": {"re": 1.0, "im": -2.0}, "c": 0.0}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "natanzon", "spectrum", "--pt", "4,1", "--format", "csv"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0].startswith("nu,E,")


def test_verify_exit_codes(monkeypatch, capsys):
    from natanzon import verify

    monkeypatch.setattr(verify, "SUITES", {**verify.SUITES, "scatter": (verify.check_unitarity,)})
    code, out, _ = run(["verify", "--suite", "scatter"], capsys)
    assert code == 0 and json.loads(out)["passed"]
    failing = verify.CheckResult("forced", False, {})
    monkeypatch.setattr(verify, "run_suite", lambda name, params=None: [failing])
    code, out, _ = run(["verify"], capsys)
    assert code == 1 and not json.loads(out)["passed"]
