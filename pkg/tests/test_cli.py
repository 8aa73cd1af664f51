import json
import shutil
import subprocess

import pytest

from hyperdet.cli import bench_rows, main
from hyperdet.formats import load_family
from hyperdet.ring import Fp


def _cases(root):
    with open(root / "fixtures" / "expected.jsonl", encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def test_golden_outputs(fixtures_dir, capsys, monkeypatch):
    monkeypatch.chdir(fixtures_dir.parent)
    monkeypatch.delenv("HYPERDET_BUDGET", raising=False)
    cases = _cases(fixtures_dir.parent)
    assert len(cases) > 30
    for case in cases:
        code = main(case["args"])
        out = capsys.readouterr().out
        assert (code, out) == (case["exit"], case["stdout"]), case["args"]


def test_entry_point(fixtures_dir):
    exe = shutil.which("hyperdet")
    if exe is None:
        pytest.skip("console script not installed")
    r = subprocess.run([exe, "det", str(fixtures_dir / "tensors" / "i2_i4_n3_Q.hdt")],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and r.stdout == '{"det":"6"}\n'


def test_budget_from_environment(fixtures_dir, capsys, monkeypatch):
    path = str(fixtures_dir / "tensors" / "identity_d4_n3_Q.hdt")
    monkeypatch.setenv("HYPERDET_BUDGET", "10")
    assert main(["det", path, "--engine", "naive"]) == 3
    # the flag wins over the environment
    assert main(["det", path, "--engine", "naive", "--budget", "1000"]) == 0
    monkeypatch.setenv("HYPERDET_BUDGET", "lots")
    assert main(["det", path]) == 2
    capsys.readouterr()


def test_global_flags_anywhere(fixtures_dir, capsys):
    path = str(fixtures_dir / "tensors" / "matrix_2x2_Q.hdt")
    assert main(["--threads", "4", "det", path]) == 0
    assert main(["det", path, "--threads", "2", "--seed", "3"]) == 0
    assert capsys.readouterr().out == '{"det":"-2"}\n' * 2


def test_parse_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.hdt"
    bad.write_text("hdt 1\nd=2 n=2 ring=Q\nlayout=dense\n1 2 3\n")
    assert main(["det", str(bad)]) == 2
    assert "input error" in capsys.readouterr().err


def test_search_writes_family(tmp_path, capsys):
    out = tmp_path / "f.csf"
    assert main(["capset", "search", "--p", "3", "--n", "1", "--d", "3", "--size", "2", "--out", str(out)]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["found"] and load_family(out).vectors.tolist() == rec["vectors"]
    assert main(["capset", "verify", str(out)]) == 0
    assert json.loads(capsys.readouterr().out)["ok"]


def test_bench_csv(capsys):
    assert main(["bench", "--shapes", "3x2,4x3", "--engines", "naive,dp,laplace", "--reps", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "engine,d,n,ring,median_s,status"
    rows = [l.split(",") for l in lines[1:]]
    assert len(rows) == 6
    assert [r[5] for r in rows] == ["ok", "ok", "odd-order", "ok", "ok", "ok"]
    assert all(r[3] == "Fp:7" for r in rows)


def test_bench_reports_budget():
    rows = bench_rows([(4, 4)], ["naive"], Fp(7), 1, 0, 10)
    assert rows[0][5] == "budget" and rows[0][4] is None
