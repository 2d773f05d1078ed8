import json
import subprocess
import sys

import pytest

from hidden_matching.cli import main


def _rows(capsys):
    return [json.loads(line) for line in capsys.readouterr().out.splitlines() if line.strip()]


@pytest.fixture
def rs_files(tmp_path):
    rs1, rs2 = tmp_path / "rs1.rs", tmp_path / "rs2.rs"
    assert main(["gen-rs", "--kind", "blocks", "--params", "r=3,t=2", "--out", str(rs1)]) == 0
    assert main(["gen-rs", "--kind", "blocks", "--params", "r=14,t=2", "--out", str(rs2)]) == 0
    return rs1, rs2


def test_verify_rs_exit_codes(tmp_path, rs_files, capsys):
    assert main(["verify-rs", str(rs_files[0])]) == 0
    assert _rows(capsys)[0]["valid"] is True
    ap = tmp_path / "ap.rs"
    assert main(["gen-rs", "--kind", "apfree", "--params", "m=6,kmax=9,method=brute", "--out", str(ap)]) == 0
    assert main(["verify-rs", str(ap)]) == 0
    capsys.readouterr()
    # relisting (3,3) as (0,1) puts a chord inside matching 0
    blocks = tmp_path / "b.rs"
    main(["gen-rs", "--kind", "blocks", "--params", "r=2,t=2", "--out", str(blocks)])
    broken = tmp_path / "broken.rs"
    broken.write_text(blocks.read_text().replace("\n3 3\n", "\n0 1\n"))
    capsys.readouterr()
    assert main(["verify-rs", str(broken)]) == 1
    finding = _rows(capsys)[0]["findings"][0]
    assert finding["kind"] == "induced" and finding["witness"] == [0, 1]
    garbage = tmp_path / "garbage.rs"
    garbage.write_text("not an rs file\n")
    assert main(["verify-rs", str(garbage)]) == 2
    assert "garbage.rs:1:" in capsys.readouterr().err


def test_missing_seed_is_usage_error(rs_files):
    with pytest.raises(SystemExit) as exc:
        main(["gen-instance", "--rs1", str(rs_files[0]), "--rs2", str(rs_files[1]), "--k", "2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_instance_round_trip(tmp_path, rs_files, capsys):
    a, b = tmp_path / "a.inst", tmp_path / "b.inst"
    base = ["gen-instance", "--rs1", str(rs_files[0]), "--rs2", str(rs_files[1]), "--k", "2", "--seed", "7"]
    assert main(base + ["--out", str(a)]) == 0
    assert main(base + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(["verify-instance", str(a)]) == 0
    assert _rows(capsys)[0]["ok"] is True

    tampered = tmp_path / "t.inst"
    lines = a.read_text().splitlines()
    start = lines.index("[PHASE1_B]")
    del lines[start + 2]
    tampered.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    assert main(["verify-instance", str(tampered)]) == 1
    assert any("PHASE1_B" in v for v in _rows(capsys)[0]["violations"])


def test_run_alg_and_eval(tmp_path, rs_files, capsys):
    inst = tmp_path / "i.inst"
    main(["gen-instance", "--rs1", str(rs_files[0]), "--rs2", str(rs_files[1]), "--k", "2", "--seed", "3",
          "--out", str(inst)])
    capsys.readouterr()
    assert main(["run-alg", "--alg", "clairvoyant", "--instance", str(inst), "--passes", "2",
                 "--order-seed", "1"]) == 0
    row = _rows(capsys)[0]
    assert row["value"] == row["surviving_hidden"] and row["streaming"]
    assert main(["run-alg", "--alg", "clairvoyant", "--instance", str(inst), "--passes", "1",
                 "--order-seed", "1"]) == 2
    answer = tmp_path / "ans.txt"
    answer.write_text("0 0\n")
    capsys.readouterr()
    assert main(["eval", "--instance", str(inst), "--answer", str(answer)]) == 0
    assert _rows(capsys)[0]["edges"] == 1


def test_params_and_lab(capsys):
    assert main(["params", "--alpha", "0.5", "--beta", "1"]) == 0
    assert _rows(capsys)[0]["ratio"] == pytest.approx(0.98039, abs=5e-6)
    assert main(["bias-lab", "--mode", "xor", "--r-prime", "6", "--support", "single", "--k", "2"]) == 0
    assert _rows(capsys)[0]["mean_abs_bias"] == pytest.approx(1)
    assert main(["bias-lab", "--mode", "kkl", "--n", "6", "--functions", "3", "--seed", "2"]) == 0
    assert all(r.get("holds", True) for r in _rows(capsys))
    assert main(["bias-lab", "--mode", "hiding", "--blocks", "3,3", "--k", "2", "--y1", "0", "--y2", "1",
                 "--encoder", "constant", "--phi", "0"]) == 0
    assert _rows(capsys)[0]["tvd"] == pytest.approx(0, abs=1e-12)


def test_report_writes_artifacts(tmp_path, rs_files, capsys):
    out = tmp_path / "rep"
    assert main(["report", "--rs1", str(rs_files[0]), "--rs2", str(rs_files[1]), "--k", "2", "--seed", "5",
                 "--instances", "3", "--out-dir", str(out)]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == ["bias_trend.png", "claims.png", "ratio_curve.png", "ratios.png", "report.jsonl"]
    rows = [json.loads(line) for line in (out / "report.jsonl").read_text().splitlines()]
    assert rows[0]["kind"] == "summary"
    assert sum(r["kind"] == "run" for r in rows) == 9


def test_module_entry_point(rs_files):
    res = subprocess.run([sys.executable, "-m", "hidden_matching", "verify-rs", str(rs_files[0])],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["valid"]
