import json
import subprocess
import sys

import pytest

from mvlmul.cli import main
from mvlmul.netlist import bill_of_cells, from_json, to_json
from mvlmul.verify import exhaustive_verify

from conftest import built


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_binary_8(tmp_path, capsys):
    path = tmp_path / "b8.json"
    code, out, _ = run(capsys, "build", "--arch", "binary-wallace", "--width", "8", "--out", str(path))
    assert code == 0
    assert "bill: AND2:64 FA:47 HA:17" in out
    assert "published: AND2:64 FA:47 HA:16" in out
    assert "cost[fa16]: 1408" in out
    n = from_json(path.read_text())
    assert str(bill_of_cells(n)) == "AND2:64 FA:47 HA:17"
    assert to_json(n) == path.read_text()


def test_build_quat_direct_4_prints_both_bills(tmp_path, capsys):
    code, out, _ = run(capsys, "build", "--arch", "quat-direct", "--width", "4", "--out", str(tmp_path / "q.json"))
    assert code == 0
    assert "published: QMUL1:16 Q331:13 Q332:9 QH32:3 QH31:2" in out
    assert "bill: QMUL1:16 Q331:20 Q332:4 QH32:5 QH31:4" in out


def test_build_width_1(tmp_path, capsys):
    code, out, _ = run(capsys, "build", "--arch", "binary-wallace", "--width", "1", "--out", str(tmp_path / "b1.json"))
    assert code == 0
    assert "bill: AND2:1\n" in out
    assert "published:" not in out


def test_build_default_output_name(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(capsys, "build", "--arch", "quat-ripple-adder", "--width", "3")
    assert code == 0
    assert (tmp_path / "quat-ripple-adder-3.json").exists()


@pytest.mark.parametrize("argv", [
    ["build", "--arch", "quat-booth", "--width", "4"],
    ["build", "--arch", "quat-direct", "--width", "0"],
    ["build", "--arch", "quat-direct", "--width", "2", "--scheme", "fa16"],
    ["build", "--arch", "binary-wallace", "--width", "2", "--policy", "greedy"],
    ["verify", "does-not-exist.json"],
    ["report"],
    [],
])
def test_usage_errors_exit_2(argv, capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_verify_built_netlist(tmp_path, capsys):
    path = tmp_path / "b8.json"
    path.write_text(to_json(built("binary-wallace", 8)))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0
    assert out.startswith("PASS: 65536/65536")


def test_verify_corrupted_netlist(tmp_path, capsys):
    d = json.loads(to_json(built("binary-wallace", 8)))
    fa = next(i for i in d["instances"] if i["cell"] == "FA")
    fa["cell"] = "HA"
    del fa["bindings"]["cin"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d))
    code, out, err = run(capsys, "verify", str(path))
    assert code == 1
    assert "FAIL" in err and "counterexample" in err
    assert out == ""


def test_verify_structurally_broken_netlist(tmp_path, capsys):
    # swapping the cell without fixing bindings leaves an unknown port
    d = json.loads(to_json(built("binary-wallace", 4)))
    next(i for i in d["instances"] if i["cell"] == "FA")["cell"] = "HA"
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(d))
    code, _, err = run(capsys, "verify", str(path))
    assert code == 1
    assert "unknown-port" in err


def test_verify_empty_netlist(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({
        "inputs": [], "outputs": [], "instances": [], "nets": [],
        "meta": {"name": "empty", "function": "mul", "output_radix": 4,
                 "operands": [{"name": "a", "radix": 4, "nets": []},
                              {"name": "b", "radix": 4, "nets": []}]},
    }))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0
    assert out.startswith("PASS: 1/1")


def test_verify_cap_and_sampling(tmp_path, capsys):
    path = tmp_path / "b8.json"
    path.write_text(to_json(built("binary-wallace", 8)))
    code, _, err = run(capsys, "verify", str(path), "--cap", "1000")
    assert code == 2 and "--trials" in err
    code, out, _ = run(capsys, "verify", str(path), "--cap", "1000", "--trials", "400", "--seed", "9")
    assert code == 0 and out.startswith("PASS: 400/400")
    code, out, _ = run(capsys, "verify", str(path), "--format", "json")
    assert code == 0 and json.loads(out)["verdict"] == "pass"


@pytest.mark.parametrize("arch", ["binary-dadda", "quat-direct", "quat-hybrid", "quat-ripple-adder"])
def test_file_round_trip_gives_same_verdict(arch, tmp_path, capsys):
    path = tmp_path / "n.json"
    code, _, _ = run(capsys, "build", "--arch", arch, "--width", "3", "--out", str(path))
    assert code == 0
    in_memory = exhaustive_verify(built(arch, 3))
    code, out, _ = run(capsys, "verify", str(path))
    assert (code == 0) == in_memory.passed
    assert out.startswith(f"PASS: {in_memory.cases}/{in_memory.cases}")


def test_report_contents_and_stability(capsys):
    code, first, _ = run(capsys, "report", "--reproduce-paper")
    assert code == 0
    _, second, _ = run(capsys, "report", "--reproduce-paper")
    assert first == second
    for needle in ("binary-8x8, fa16, 1392", "quat-direct-adders, min, 2888",
                   "ratio(binary-fa28 / quat-direct-min) = 0.65",
                   "hybrid-4x4, fa16, 1532", "hybrid-4x4-full, fa16, 1672",
                   "quat-direct-full, min, 3752", "quat-direct-full, subblock, 4628",
                   "| total | 54 | 76 |", "erratum:"):
        assert needle in first
    assert "| quat-direct-adders | min | Q331:13 Q332:9 QH32:3 QH31:2 | Q331:20 Q332:4 QH32:5 QH31:4 |" in first


def test_report_formats(tmp_path, capsys):
    code, out, _ = run(capsys, "report", "--reproduce-paper", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0].startswith("architecture,scheme,")
    code, out, _ = run(capsys, "report", "--reproduce-paper", "--format", "json")
    d = json.loads(out)
    assert d["ratios"]["binary-fa28 / quat-direct-min"] == "0.65"
    assert ["binary-8x8", "fa28", 1892] in d["totals"]
    target = tmp_path / "r.md"
    code, out, _ = run(capsys, "report", "--reproduce-paper", "--out", str(target))
    assert code == 0 and out == ""
    assert "ratio(binary-fa28 / quat-direct-min) = 0.65" in target.read_text()


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "mvlmul", "build", "--arch", "quat-direct", "--width", "1",
         "--out", str(tmp_path / "q1.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "bill: QMUL1:1" in proc.stdout
