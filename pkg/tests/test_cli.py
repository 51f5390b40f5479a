import json
import os
import subprocess
import sys

import pytest

from ulrichcert import cli
from conftest import REFERENCE_SEED, pipeline_run


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cached_construct(monkeypatch, reference_run):
    def fake(cfg):
        assert cfg.seed == REFERENCE_SEED
        return pipeline_run(cfg.seed, cfg.prime)
    monkeypatch.setattr(cli, "construct", fake)


def test_chern(capsys):
    code, out, _ = run(capsys, "chern", "--rank", "3")
    assert code == 0
    assert out.splitlines()[0] == "(1, 3, 15, 7); (s,d) = (3,6)"
    assert all(line.startswith("#") for line in out.splitlines()[1:])
    code, out, _ = run(capsys, "chern", "--rank", "4", "--format", "json")
    assert json.loads(out)["chern"] == [1, 4, 28, 24]


def test_bgn(capsys):
    code, out, _ = run(capsys, "bgn", "2", "2", "1", "2")
    assert code == 0 and out.splitlines()[0] == "empty"
    _, out, _ = run(capsys, "bgn", "2", "1", "1", "1")
    assert out.splitlines()[0] == "nonempty"


def test_dims(capsys):
    _, out, _ = run(capsys, "dims", "--rank", "4", "--format", "json")
    data = json.loads(out)
    assert (data["moduli_dim"], data["strict_ss_dim"], data["ext1_dim"], data["chi_EE"]) == \
        (17, 13, 4, -16)
    _, out, _ = run(capsys, "dims", "--rank", "3", "--format", "json")
    data = json.loads(out)
    assert data["orthogonality"] == {"case1": 9, "case2": 9, "case3": 8, "case4": 9,
                                     "ambient": 10}


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


CUBIC = "ring p=997 vars=x,y,z,w degrees=[1];[1];[1];[1] order=grevlex\nx*z - y^2\ny*w - z^2\nx*w - y*z\n"


def test_betti_and_hilbert(capsys, tmp_path):
    path = write(tmp_path, "tc.txt", CUBIC)
    code, out, _ = run(capsys, "betti", path, "--format", "json")
    assert code == 0 and json.loads(out)["totals"] == [1, 3, 2]
    code, out, _ = run(capsys, "hilbert", path, "--format", "json")
    data = json.loads(out)
    assert (data["dim"], data["degree"], data["genus"]) == (2, 3, 0)
    assert data["numerator"] == {"0": 1, "2": -3, "3": 2}


def test_parse_error_reports_file_and_line(capsys, tmp_path):
    path = write(tmp_path, "bad.txt", "ring p=997 vars=x,y degrees=[1];[1] order=grevlex\nx^2 + + y\n")
    code, _, err = run(capsys, "betti", path)
    assert code == 2
    assert err.startswith(f"ulrichcert: error: {path}:2:")
    code, _, err = run(capsys, "betti", str(tmp_path / "missing.txt"))
    assert code == 2 and "missing.txt" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["chern", "--rank", "3", "--bogus"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "construct", "--prime", "1000")
    assert code == 2 and "not prime" in err


def test_construct_then_certify(capsys, tmp_path, cached_construct, reference_run):
    out_dir = tmp_path / "run"
    code, out, _ = run(capsys, "construct", "--seed", str(REFERENCE_SEED), "--out", str(out_dir))
    assert code == 0
    assert out.splitlines()[0] == f"verdict: pass (prime 997, seed {REFERENCE_SEED})"
    assert sorted(os.listdir(out_dir)) == sorted(["report.json"] + list(cli.IDEAL_FILES.values()))
    report = json.loads((out_dir / "report.json").read_text())
    assert report == reference_run.report.to_json()
    assert report["stages"]["acm_curve"]["checks"][2]["got"] == [1, 12, 25, 16, 2]

    code, out, _ = run(capsys, "certify", str(out_dir / "I_D.txt"), str(out_dir / "I_X.txt"),
                       "--seed", str(REFERENCE_SEED), "--format", "json")
    assert code == 0
    certified = json.loads(out)
    assert certified["mode"] == "certify" and certified["verdict"] == "pass"
    for name, stage in certified["stages"].items():
        assert stage == report["stages"][name]

    code, out, _ = run(capsys, "export-oracle", "--ideals", str(out_dir))
    assert code == 0
    assert "ID = ideal(" in out and "assert" in out


def test_certify_rejects_mismatched_rings(capsys, tmp_path):
    a = write(tmp_path, "a.txt", CUBIC)
    b = write(tmp_path, "b.txt", "ring p=997 vars=x,y degrees=[1];[1] order=grevlex\nx\n")
    code, _, err = run(capsys, "certify", a, b)
    assert code == 2 and "different rings" in err


def test_sweep(capsys, cached_construct):
    code, out, _ = run(capsys, "sweep", "--seed", str(REFERENCE_SEED), "--count", "1",
                       "--jobs", "1", "--min-pass", "1")
    assert code == 0
    assert out.splitlines() == [f"seed {REFERENCE_SEED}: pass", "pass rate 1/1"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ulrichcert", "bgn", "2", "2", "3", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "empty"
