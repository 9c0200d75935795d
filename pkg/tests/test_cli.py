import json

import pytest

from helpers import FIGURE8, TREFOIL, UNKNOTS
from knotcert.cli import run


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {"trefoil": TREFOIL, "fig8": FIGURE8, "unknot": UNKNOTS["zero"], "braid": "strands=2 s1 s1 s1"}.items():
        p = tmp_path / f"{name}.pd"
        p.write_text(text + "\n")
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def test_prove_then_verify(files, capsys):
    cert = str(files["dir"] / "c.json")
    assert run(["prove", files["trefoil"], "--pmax", "13", "--deterministic", "--out", cert]) == 0
    assert run(["verify", files["trefoil"], "--cert", cert]) == 0
    assert "accepted: OK" in capsys.readouterr().out


def test_prove_stdout_round_trip(files, capsys):
    assert run(["prove", files["braid"], "--deterministic"]) == 0
    out = capsys.readouterr().out
    cert = files["dir"] / "b.json"
    cert.write_text(out)
    assert run(["verify", files["braid"], "--cert", str(cert)]) == 0
    assert json.loads(out)["prime"] == 2


def test_output_file_is_byte_identical(files):
    a, b = files["dir"] / "a.json", files["dir"] / "b.json"
    run(["prove", files["fig8"], "--deterministic", "--out", str(a)])
    run(["prove", files["fig8"], "--deterministic", "--out", str(b), "--workers", "2"])
    assert a.read_bytes() == b.read_bytes()


def test_tampered_certificate(files, capsys):
    cert = files["dir"] / "c.json"
    run(["prove", files["trefoil"], "--pmin", "13", "--pmax", "13", "--strategy", "alexander", "--out", str(cert)])
    obj = json.loads(cert.read_text())
    obj["matrices"][0][0][1] = (obj["matrices"][0][0][1] + 1) % 13
    bad = files["dir"] / "tampered.json"
    bad.write_text(json.dumps(obj, separators=(",", ":")))
    capsys.readouterr()
    assert run(["verify", files["trefoil"], "--cert", str(bad)]) == 1
    assert "RelationViolated" in capsys.readouterr().out


def test_wrong_diagram_rejected(files, capsys):
    cert = files["dir"] / "c.json"
    run(["prove", files["trefoil"], "--out", str(cert)])
    assert run(["verify", files["fig8"], "--cert", str(cert)]) == 1
    assert "DigestMismatch" in capsys.readouterr().out


def test_not_found_exit_1(files, capsys):
    assert run(["prove", files["unknot"], "--pmax", "50"]) == 1
    assert "not found" in capsys.readouterr().err


def test_density(capsys):
    assert run(["density", "--poly", "1,0,1", "--xmax", "100"]) == 0
    out = capsys.readouterr().out
    assert "12/25" in out
    assert "first prime with a root = 2" in out


def test_density_csv(tmp_path):
    path = tmp_path / "rows.csv"
    assert run(["density", "--poly", "1,0,1", "--xmax", "30", "--csv", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "p,has_root,first_root"
    assert lines[1:4] == ["2,1,1", "3,0,", "5,1,2"]


def test_parse_group_alex(files, capsys):
    assert run(["parse", files["trefoil"]]) == 0
    assert run(["group", files["trefoil"]]) == 0
    assert run(["alex", files["fig8"], "--coeffs"]) == 0
    out = capsys.readouterr().out
    assert "<a,b,c |" in out
    assert "t^2 - 3*t + 1" in out and "1,-3,1" in out


def test_encode(files, capsys):
    assert run(["encode", files["trefoil"], "--pair", "1,2"]) == 0
    assert "vars=16 polys=16" in capsys.readouterr().out
    assert run(["encode", files["trefoil"], "--pair", "a,z"]) == 2
    assert run(["encode", files["unknot"]]) == 2


def test_usage_and_input_errors(files, tmp_path, capsys):
    assert run([]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["prove"]) == 2
    assert run(["prove", str(tmp_path / "missing.pd")]) == 2
    broken = tmp_path / "broken.pd"
    broken.write_text("PD[X(1,2")
    assert run(["prove", str(broken)]) == 2
    link = tmp_path / "link.pd"
    link.write_text("PD[X(1,3,2,4),X(3,1,4,2)]")
    assert run(["prove", str(link)]) == 2
    assert run(["parse", str(link)]) == 1
    assert run(["verify", files["trefoil"], "--cert", str(tmp_path / "nope.json")]) == 2
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{")
    assert run(["verify", files["trefoil"], "--cert", str(garbage)]) == 1
    assert run(["density", "--poly", "1,x", "--xmax", "10"]) == 2
    assert run(["prove", files["trefoil"], "--pmin", "1"]) == 2
    assert run(["--help"]) == 0
