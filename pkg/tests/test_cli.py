import json
import subprocess
import sys

import pytest

from multibrot.cli import build_parser, main


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def run_json(capsys, *argv):
    status, out, err = run(capsys, *argv, "--no-timing")
    assert status == 0, err
    return json.loads(out)


def test_rotset(capsys):
    doc = run_json(capsys, "rotset", "--degree", "2", "--rot", "1/2", "--deploy", "2")
    assert doc["angles"] == ["1/3", "2/3"]
    assert doc["meta"]["wall_time"] is None and doc["meta"]["command"] == "rotset"


def test_symmetry(capsys):
    doc = run_json(capsys, "symmetry", "--d", "5")
    assert doc["count"] == 4 and len(doc["symmetries"]) == 4


def test_bang(capsys):
    doc = run_json(capsys, "bang", "--a", "2", "--m", "5")
    assert doc["primitive_primes"] == ["31"]


def test_replay(capsys):
    doc = run_json(capsys, "replay", "--d", "2", "--D", "3", "--k", "5..5")
    (rec,) = doc["records"]
    assert rec["m"] == 9 and rec["p"] == "73" and rec["contradiction"]


def test_curve(capsys):
    doc = run_json(capsys, "curve", "--q", "0,1", "--r", "0,0,1")
    assert doc["invariant"] is True
    doc = run_json(capsys, "curve", "--q", "0,1", "--r", "1,0,1", "--method", "substitute")
    assert doc["invariant"] is False


def test_pcf_csv(capsys):
    status, out, _ = run(capsys, "pcf", "--d", "2", "--period", "3", "--no-timing")
    assert status == 0
    lines = out.splitlines()
    assert lines[0].startswith("# {") and json.loads(lines[0][2:])["command"] == "pcf"
    assert lines[1] == "re,im,type,period,preperiod"
    assert len(lines) == 2 + 3


def test_malformed_deployment_exits_1(capsys):
    status, _, err = run(capsys, "rotset", "--d", "2", "--rot", "1/2", "--deploy", "1")
    assert status == 1 and json.loads(err)["error"] == "malformed-deployment"


def test_ray_and_render(tmp_path, capsys):
    ray = tmp_path / "ray.json"
    assert main(["ray", "--d", "2", "--angle", "1/3", "--json", str(ray), "--no-timing"]) == 0
    trace = json.loads(ray.read_text())
    assert trace["meta"]["command"] == "ray"
    ppm = tmp_path / "m.ppm"
    args = ["render", "--d", "2", "--px", "60x40", "--max-iter", "100", "--out", str(ppm), "--overlay", str(ray)]
    assert main(args + ["--no-timing"]) == 0
    assert ppm.read_bytes().startswith(b"P5\n60 40\n255\n")
    capsys.readouterr()


def test_no_timing_is_byte_stable(capsys):
    argv = ["boettcher", "--d", "3", "--order", "6", "--eval", "3,1"]
    a = run(capsys, *argv, "--no-timing")[1]
    b = run(capsys, *argv, "--no-timing")[1]
    assert a == b and '"wall_time": null' in a
    timed = json.loads(run(capsys, *argv)[1])
    assert timed["meta"]["wall_time"] >= 0


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["ray", "--d", "2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["render", "--d", "2", "--px", "wide", "--out", "x.ppm"])
    assert exc.value.code == 2


def test_computation_error_exits_1(capsys):
    status, _, err = run(capsys, "land", "--d", "2", "--angles", "1/3", "1/7")
    assert status == 1
    assert json.loads(err.strip().splitlines()[-1])["command"] == "land"
    status, _, err = run(capsys, "ray", "--d", "2", "--angle", "0", "--dynamic", "1,0")
    assert status == 1


def test_precision_env(monkeypatch, capsys):
    monkeypatch.setenv("ARTIFACT_PRECISION", "200")
    doc = run_json(capsys, "bang", "--a", "3", "--m", "4")
    assert doc["meta"]["config"]["precision"] == 200
    monkeypatch.delenv("ARTIFACT_PRECISION")
    doc = run_json(capsys, "bang", "--a", "3", "--m", "4")
    assert doc["meta"]["config"]["precision"] == 128


def test_manpage(capsys):
    status, out, _ = run(capsys, "manpage")
    assert status == 0 and out.startswith(".TH MULTIBROT 1")
    for name in ("render", "ray", "land", "rotset", "pcf", "symmetry", "boettcher", "bang", "replay", "curve"):
        assert f".SS {name}" in out


def test_parser_has_every_subcommand():
    parser = build_parser()
    text = parser.format_help()
    assert "verify-all" in text


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "multibrot.cli", "bang", "--a", "2", "--m", "6", "--no-timing"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(proc.stdout)["primitive_primes"] == []


def test_land_parabolic(capsys):
    doc = run_json(capsys, "land", "--d", "3", "--parabolic", "2")
    assert max(doc["parabolic_residuals"]) < 1e-10
