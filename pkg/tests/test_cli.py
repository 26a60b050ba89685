"""CLI subcommands: record shapes, exit codes, determinism."""

import io
import json
import subprocess
import sys

from ddlab.cli import main


def run_cli(argv):
    buf = io.StringIO()
    code = main(argv, stream=buf)
    return code, buf.getvalue()


def records(text):
    return [json.loads(line) for line in text.strip().splitlines() if line]


def test_axioms_affine():
    code, out = run_cli(["axioms", "--geometry", "affine", "--dim", "3",
                         "--bound", "2"])
    assert code == 0
    by_axiom = {r["axiom"]: r["status"] for r in records(out)}
    assert by_axiom == {"closure": "PASS", "exchange": "PASS",
                        "local-homogeneity": "BOUNDED-PASS"}


def test_axioms_degenerate_via_partition():
    code, out = run_cli(["axioms", "--geometry", "degenerate",
                         "--partition", "[[0,1],[2,3]]", "--bound", "2"])
    assert code == 0


def test_axioms_failure_exit_code():
    # unequal blocks break local homogeneity
    code, out = run_cli(["axioms", "--geometry", "degenerate",
                         "--partition", "[[0,1],[2]]", "--bound", "2"])
    assert code == 1
    statuses = {r["axiom"]: r["status"] for r in records(out)}
    assert statuses["local-homogeneity"] == "FAIL"


def test_surjection_verify_linear():
    code, out = run_cli(["surjection", "verify", "--construction", "linear",
                         "--dim", "5", "--max-t", "1"])
    assert code == 0
    recs = records(out)
    assert len(recs) == 32
    assert all(r["ok"] for r in recs)
    assert all(r["f_of_S"] == r["T"] for r in recs if not r["skipped"])


def test_surjection_verify_general():
    code, out = run_cli(["surjection", "verify", "--construction", "general",
                         "--geometry", "linear", "--dim", "3",
                         "--max-t", "1"])
    assert code == 0
    assert all(r["ok"] for r in records(out))


def test_surjection_preimage_record():
    code, out = run_cli(["surjection", "preimage", "--construction",
                         "linear", "--dim", "3", "--target", '["100"]'])
    assert code == 0
    rec = records(out)[0]
    assert rec["T"] == ["100"]
    assert rec["cardinality_identity"] and rec["ok"]
    assert rec["f_of_S"] == ["100"]


def test_surjection_collisions():
    code, out = run_cli(["surjection", "collisions", "--construction",
                         "linear", "--dim", "2", "--count", "3"])
    assert code == 0
    recs = records(out)
    assert len(recs) == 3 and all(r["ok"] for r in recs)
    assert recs[0]["S1"] == ["00"] and recs[0]["S2"] == ["00", "10"]


def test_support_and_synth(tmp_path):
    path = tmp_path / "rel.json"
    path.write_text(json.dumps({"n": 7, "k": 1, "tuples": [[3]]}))
    code, out = run_cli(["support", "--file", str(path), "--compare"])
    assert code == 0
    rec = records(out)[0]
    assert rec["minimal"] == [3] and rec["recursive"] == [3]
    assert rec["size_gap"] == 0
    assert rec["formula_minimal"] == "(or (and (= x1 c3)))"

    code, out = run_cli(["synth", "--file", str(path)])
    rec = records(out)[0]
    assert code == 0 and rec["exact"] and rec["support"] == [3]

    code, out = run_cli(["synth", "--file", str(path), "--support", "[0]"])
    assert code == 1
    assert records(out)[0]["ok"] is False


def test_support_majority_tie_reported(tmp_path):
    path = tmp_path / "tie.json"
    path.write_text(json.dumps(
        {"n": 4, "k": 2, "tuples": [[0, 1], [1, 0]]}))
    code, out = run_cli(["support", "--file", str(path), "--compare"])
    assert code == 0
    rec = records(out)[0]
    assert rec["majority_tie"] and rec["tie_stage"] == "chain-cardinality"
    assert rec["minimal"] == [0, 1]


def test_orbits_and_dichotomy():
    code, out = run_cli(["orbits", "--dim", "2", "--fixed", '["10"]'])
    assert code == 0
    rec = records(out)[0]
    assert rec["blocks"] == [["00"], ["10"], ["01", "11"]]

    code, out = run_cli(["dichotomy", "--dim", "2", "--set", '["10"]'])
    rec = records(out)[0]
    assert rec["classification"] == "not-invariant"
    assert rec["moved"] == ["10", "01"]


def test_equivariance_and_sigma():
    code, out = run_cli(["equivariance", "--construction", "linear",
                         "--dim", "3", "--trials", "50"])
    assert code == 0
    assert records(out)[0]["failures"] == 0

    code, out = run_cli(["sigma", "--ground", "4", "--fixed", "[0]",
                         "--sets", "[[1,2]]", "--target", "[1]"])
    assert code == 0
    rec = records(out)[0]
    assert rec["classes"] == [[0], [1, 2], [3]]
    assert rec["witness"] == [1, 2]


def test_byte_identical_output_for_same_seed(tmp_path):
    argv = ["equivariance", "--construction", "general", "--geometry",
            "affine", "--dim", "3", "--trials", "40", "--seed", "123"]
    _, first = run_cli(argv)
    _, second = run_cli(argv)
    assert first == second

    out_path = tmp_path / "report.jsonl"
    code, _ = run_cli(argv + ["--out", str(out_path)])
    assert code == 0
    assert out_path.read_text() == first


def test_table_format():
    code, out = run_cli(["orbits", "--dim", "2", "--format", "table"])
    assert code == 0
    assert "blocks=" in out and "{" not in out.splitlines()[0][:1]


def test_config_errors_exit_2():
    assert run_cli(["axioms", "--geometry", "linear"])[0] == 2
    assert run_cli(["support", "--file", "/no/such/file.json"])[0] == 2
    assert run_cli(["sigma"])[0] == 2
    assert run_cli(["no-such-command"])[0] == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ddlab.cli", "orbits", "--dim", "1"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["blocks"] == [["0"], ["1"]]
