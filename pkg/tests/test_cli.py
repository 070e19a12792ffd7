import json
import subprocess
import sys

import pytest

from modres.cli import main


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "modres", *args], capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_threshold_json(capsys):
    assert main(["threshold", "--n", "10", "--q", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["k"] == 5 and set(doc) == {"n", "q", "alpha", "k", "log2_g_k", "log2_g_k1", "x0"}


def test_entropy_root(capsys):
    assert main(["entropy-root", "--q", "2", "--alpha", "1,0"]) == 0
    assert abs(json.loads(capsys.readouterr().out)["x0"] - 0.7729) < 5e-4


def test_dist(capsys):
    assert main(["dist", "sym", "--v", "1,1,0", "--q", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == "1/4"
    assert main(["dist", "sum", "--n", "2", "--a", "0", "--q", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == "1/4"
    assert main(["dist", "joint", "--u", "1", "--v", "1,1", "--q", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == "0"


def test_graph_file(tmp_path, capsys):
    path = tmp_path / "k3.txt"
    path.write_text("3\n011\n101\n110\n")
    assert main(["f-exact", "--graph", str(path), "--q", "2", "--r", "0"]) == 0
    assert json.loads(capsys.readouterr().out)["witness"] == [0, 1, 2]
    assert main(["count", "--graph", str(path), "--k", "2", "--q", "2", "--r", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 3


def test_partition_exact_empty_graph_file(tmp_path):
    path = tmp_path / "e.txt"
    path.write_text("4\n0000\n0000\n0000\n0000\n")
    out = tmp_path / "p.json"
    assert main(["partition-exact", "--graph", str(path), "--q", "5", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["rows"][0]["value"] == 1


def test_exit_codes(tmp_path):
    assert run_cli("threshold", "--n", "10", "--q", "3", "--alpha", "0.5,0.5")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n01\n00\n")
    code, _, err = run_cli("f-exact", "--graph", str(bad))
    assert code == 2 and "asymmetric at (1,0)" in err
    assert run_cli("f-exact", "--n", "30")[0] == 3
    assert run_cli("dist", "sym", "--v", "0,0,0,0,0,0,0,0,0", "--q", "2")[0] == 3


def test_format_by_extension(tmp_path):
    csv_out, json_out = tmp_path / "a.csv", tmp_path / "a.json"
    args = ["expect", "--n", "8", "--k", "3", "--q", "3", "--trials", "3"]
    assert main(args + ["--out", str(csv_out)]) == 0
    assert main(args + ["--out", str(json_out)]) == 0
    assert csv_out.read_text().startswith("row,trial,seed,value")
    assert json.loads(json_out.read_text())["summary"]["trials"] == 3
    assert main(args + ["--out", str(csv_out), "--format", "json"]) == 0
    json.loads(csv_out.read_text())


@pytest.mark.parametrize("cmd", [
    ["expect", "--n", "12", "--k", "4", "--q", "3", "--trials", "12"],
    ["scan", "--n", "12", "--q", "2", "--r", "1", "--trials", "6"],
    ["partition-search", "--n", "15", "--q", "2", "--trials", "4", "--budget", "300"],
])
def test_workers_byte_identical(tmp_path, cmd):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(cmd + ["--workers", "1", "--out", str(a), "--seed", "9"]) == 0
    assert main(cmd + ["--workers", "3", "--out", str(b), "--seed", "9"]) == 0
    assert a.read_bytes() == b.read_bytes()
