import json

import pytest

from fwreg.cli import main


@pytest.fixture
def inst(tmp_path):
    def make(name):
        path = tmp_path / f"{name}.inst"
        assert main(["example", name, "--out", str(path)]) == 0
        return path

    return make


def test_zshift_n_transfix_is_not_transfixed(inst, tmp_path, capsys):
    out = tmp_path / "t.json"
    assert main(["transfix", str(inst("zshift-N")), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["result"]["verdict"] == "not-transfixed"


def test_validate_broken_instance_exits_nonzero(inst, capsys):
    assert main(["validate", str(inst("broken-z2"))]) == 1
    assert "violation: containment at g=s h=s x=1" in capsys.readouterr().err


def test_regularize_then_verify(inst, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["regularize", str(inst("a1-z2")), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["result"]["core"]["U"] == ["eta", "c1", "c2"]
    assert main(["verify", str(out)]) == 0
    assert "accepted" in capsys.readouterr().out
    cert = json.loads(out.read_text())
    cert["result"]["final_J"] = ["s"]
    out.write_text(json.dumps(cert))
    assert main(["verify", str(out)]) == 1


def test_two_runs_write_identical_bytes(inst, tmp_path):
    path = inst("a1-z3")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["regularize", str(path), "--out", str(a)])
    main(["regularize", str(path), "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_exit_codes_per_error_family(inst, tmp_path, capsys):
    bad = tmp_path / "bad.inst"
    bad.write_text("points a\nle a b\n")
    assert main(["validate", str(bad)]) == 3
    assert "line 2, column 6" in capsys.readouterr().err
    assert main(["noetherian-core", str(inst("a1-z2"))]) == 4
    assert main(["neumann", str(inst("broken-shift"))]) == 5
    assert main(["frobnicate"]) == 2


def test_certificate_transfixer_from_file(inst, tmp_path, capsys):
    yfile = tmp_path / "y.txt"
    yfile.write_text("zset Y base=nonneg\n")
    assert main(["transfix", str(inst("zshift-N")), "--transfixer", "cert", str(yfile)]) == 4
    assert "u^-1 moves 0 out of Y" in capsys.readouterr().err
    yfile.write_text("zset Y base=empty\n")
    assert main(["transfix", str(inst("zshift-singleton")), "--transfixer", "cert", str(yfile)]) == 0
