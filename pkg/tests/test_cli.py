import json
import subprocess
import sys

from cyclegeo.cli import main
from cyclegeo.cycle_type import from_counts
from cyclegeo.geometry import Permutation, cycle_type_of


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sample_permutations(capsys, tmp_path):
    code, out, _ = _run(capsys, "sample", "--type", "1,0,1", "--count", "5", "--seed", "3")
    assert code == 0
    perms = [Permutation([int(v) for v in line.split(",")]) for line in out.splitlines()]
    assert len(perms) == 5 and all(cycle_type_of(p) == from_counts([1, 0, 1]) for p in perms)
    path = tmp_path / "p.csv"
    assert _run(capsys, "sample", "--all-p-cycles", "8,2", "--count", "3", "--out", str(path))[0] == 0
    assert len(path.read_text().splitlines()) == 3
    code, out, _ = _run(capsys, "sample", "--involution", "9,3", "--seed", "1")
    assert cycle_type_of(Permutation([int(v) for v in out.split(",")])) == from_counts([3, 3])
    assert _run(capsys, "sample", "--ewens", "12,2.0", "--count", "2")[0] == 0


def test_sample_deterministic(capsys):
    a = _run(capsys, "sample", "--type", "0,0,0,0,0,1", "--count", "4", "--seed", "11")[1]
    b = _run(capsys, "sample", "--type", "0,0,0,0,0,1", "--count", "4", "--seed", "11")[1]
    assert a == b


def test_sample_points(capsys):
    code, out, _ = _run(capsys, "sample", "--type", "[1,2,1,1]", "--points")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "p,k,l,x,y" and len(lines) == 13
    assert _run(capsys, "sample", "--type", "2", "--points", "--count", "2")[0] == 2


def test_sample_errors(capsys):
    assert _run(capsys, "sample", "--involution", "9,4")[0] == 2
    assert _run(capsys, "sample", "--all-p-cycles", "9")[0] == 2


def test_stats(capsys, tmp_path):
    perms = tmp_path / "perms.csv"
    perms.write_text("3,1,2,5,4\n# comment\n2,1,3\n")
    out = tmp_path / "stats.csv"
    code, _, _ = _run(capsys, "stats", "--in", str(perms), "--metrics",
                      "lis,lds,shape,records,pattern:231,inversions,lds_k:1,hrec,lrec", "--out", str(out))
    assert code == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "lis,lds,shape,records,pattern:231,inversions,lds_k:1,hrec,lrec"
    assert rows[1] == "3,2,3 2,2 2,0,3,2,2,2"
    assert rows[2] == "2,2,2 1,2 2,0,1,2,2,2"
    assert _run(capsys, "stats", "--in", str(perms), "--metrics", "bogus")[0] == 2
    assert _run(capsys, "stats", "--in", str(tmp_path / "missing.csv"))[0] == 2


def test_theory_commands(capsys, tmp_path):
    out = tmp_path / "sigma.csv"
    assert _run(capsys, "theory", "sigma", "--r", "3", "--p1", "0", "--p2", "0.5", "--out", str(out))[0] == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# r=3") and lines[1] == "pattern,123,132,213,231,312,321"
    assert len(lines) == 8
    code, text, _ = _run(capsys, "theory", "flskv", "--grid", "0:2:0.5")
    rows = text.splitlines()
    assert rows[0] == "r,f_lskv" and len(rows) == 6 and rows[-1] == "2,1.0"
    code, text, _ = _run(capsys, "theory", "mu", "--r", "2", "--p1", "0.25")
    assert "12,0.59375,19,32" in text
    assert _run(capsys, "theory", "flskv", "--grid", "1:0:0.5")[0] == 2
    assert _run(capsys, "theory", "sigma", "--r", "5", "--p1", "0.5")[0] == 2


def test_oracle_commands(capsys):
    code, text, _ = _run(capsys, "oracle", "enumerate", "--type", "1,0,1")
    assert code == 0 and len(text.splitlines()) == 8
    code, text, _ = _run(capsys, "oracle", "greene-check", "--max-n", "5")
    assert code == 0 and text.count("ok") == 5
    code, text, _ = _run(capsys, "oracle", "distribution", "--type", "0,2", "--statistic", "pattern:21")
    assert text.splitlines() == ["value,prob_num,prob_den", "2,1,3", "4,1,3", "6,1,3"]
    assert _run(capsys, "oracle", "enumerate", "--type", "0,0,0,0,0,0,0,0,0,1")[0] == 2


def _write_cfg(tmp_path, tolerances):
    cfg = {"name": "c", "type_spec": {"kind": "all_p_cycles", "params": {"p": 2}}, "n": 400, "trials": 4,
           "seed": 1, "tolerances": tolerances}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


def test_experiment_exit_codes(capsys, tmp_path):
    good = _write_cfg(tmp_path, {"lds_mean": [0.5, 5.0]})
    outdir = tmp_path / "out"
    code, text, _ = _run(capsys, "experiment", "lds", "--config", str(good), "--out", str(outdir), "--seed", "5")
    assert code == 0 and "PASS" in text
    assert (outdir / "raw.csv").exists() and json.loads((outdir / "summary.json").read_text())["config"]["seed"] == 5
    bad = _write_cfg(tmp_path, {"lds_mean": [10.0, 11.0]})
    assert _run(capsys, "experiment", "lds", "--config", str(bad))[0] == 1
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"name": "c", "n": 5, "trials": 1, "type_spec": {"kind": "x"}}))
    assert _run(capsys, "experiment", "lds", "--config", str(broken))[0] == 2
    assert _run(capsys, "experiment", "shape")[0] == 2


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "cyclegeo.cli", "theory", "mu", "--r", "1"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.splitlines()[1].startswith("1,1.0")
