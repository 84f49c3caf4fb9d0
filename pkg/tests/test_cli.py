from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from postlie.cli import run

from .conftest import DATA, GOLDEN

FAILING_BRACKET = {"dim": 2, "products": {"triangle": [[0, 1, 0, "1/1"]]}}


def _run(argv, capsys) -> tuple[int, dict]:
    code = run(argv)
    return code, json.loads(capsys.readouterr().out)


def _write(tmp_path, name, doc) -> str:
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


@pytest.mark.parametrize("name,op", [("example_1", "graft"), ("uparrow", "uparrow"),
                                     ("hat_product", "product")])
def test_golden_byte_equal(name, op, tmp_path):
    out = tmp_path / "out.json"
    code = run(["trees", op, str(GOLDEN / f"{name}.input.json"), "-o", str(out)])
    assert code == 0
    assert out.read_bytes() == (GOLDEN / f"{name}.expected.json").read_bytes()


def test_golden_example_content():
    doc = json.loads((GOLDEN / "example_1.expected.json").read_text())
    assert doc["status"] == "pass" and len(doc["result"]) == 2
    assert {t["coeff"] for t in doc["result"]} == {"1/1"}
    hat = json.loads((GOLDEN / "hat_product.expected.json").read_text())
    assert sorted(t["coeff"] for t in hat["result"]) == ["1/1", "1/1", "2/1", "2/1"]


def test_check_exit_codes(tmp_path, capsys):
    code, doc = _run(["check", str(DATA / "split2.json")], capsys)
    assert code == 0 and doc["status"] == "pass" and doc["axioms"]["pre_lie"]["holds"]
    bad = _write(tmp_path, "bad.json", FAILING_BRACKET)
    code, doc = _run(["check", bad], capsys)
    assert code == 1 and doc["status"] == "fail"
    w = doc["axioms"]["pre_lie"]["witnesses"][0]
    assert w["axiom"] == "pre_lie" and w["defect"] != ["0/1", "0/1"]
    assert doc["axioms"]["pre_lie"]["failed_axioms"] == ["pre_lie"]


@pytest.mark.parametrize("doc,path", [
    ({"dim": 2, "products": {"triangle": [[0, 2, 0, "1/1"]]}}, "$.products.triangle[0][1]"),
    ({"dim": 2, "products": {"triangle": [[0, 1, 0, 0.5]]}}, "$.products.triangle[0][3]"),
    ({"dim": 2}, "$"),
    ({"dim": 2, "products": {"bracket": [[0, 1, 0, "1/1"]]}}, "$.products.bracket"),
])
def test_schema_errors_exit_2(doc, path, tmp_path, capsys):
    code, out = _run(["check", _write(tmp_path, "in.json", doc)], capsys)
    assert code == 2 and out["status"] == "schema_error"
    assert out["error"]["path"] == path


def test_not_json_and_missing_file(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{")
    code, out = _run(["check", str(p)], capsys)
    assert code == 2 and "not JSON" in out["error"]["message"]
    code, out = _run(["check", str(tmp_path / "missing.json")], capsys)
    assert code == 2


def test_tree_errors_exit_2(tmp_path, capsys):
    doc = json.loads((GOLDEN / "example_1.input.json").read_text())
    doc["node"] = 2
    code, out = _run(["trees", "graft-at", _write(tmp_path, "g.json", doc)], capsys)
    assert code == 2 and out["status"] == "invalid_input"
    doc["node"] = 7
    code, out = _run(["trees", "graft-at", _write(tmp_path, "g.json", doc)], capsys)
    assert code == 2 and out["error"]["path"] == "$.node"
    doc["tau"]["children"][1]["tree"]["node"] = [1, 0]
    code, out = _run(["trees", "graft", _write(tmp_path, "g.json", doc)], capsys)
    assert code == 2 and out["error"]["path"].startswith("$.tau")


def test_graft_at_matches_graft(tmp_path, capsys):
    doc = json.loads((GOLDEN / "example_1.input.json").read_text())
    code, full = _run(["trees", "graft", str(GOLDEN / "example_1.input.json")], capsys)
    trees = []
    for node in (0, 1):
        doc["node"] = node
        code, out = _run(["trees", "graft-at", _write(tmp_path, "g.json", doc)], capsys)
        assert code == 0
        trees.append(out["result"])
    assert sorted(map(json.dumps, trees)) == sorted(json.dumps(t["term"]) for t in full["result"])


def test_mc_and_cohomology(tmp_path, capsys):
    code, out = _run(["cohomology", str(DATA / "zero2.json"), "--degree", "1", "--degree", "2"],
                     capsys)
    assert code == 0
    assert [out["cohomology"][k]["betti"] for k in ("1", "2")] == [4, 10]
    code, out = _run(["cohomology", str(DATA / "zero2.json"), "--les", "3"], capsys)
    assert code == 0 and out["les"]["exact"]
    alg = json.loads((DATA / "split2.json").read_text())
    alg["products"]["pi"] = [[0, 1, 0, "1/1"], [1, 0, 0, "-1/1"]]
    code, out = _run(["mc", _write(tmp_path, "mc.json", alg)], capsys)
    assert code == 1 and out["predicates_agree"] and not out["is_post_lie_deformation"]
    alg["products"]["pi"] = []
    code, out = _run(["mc", _write(tmp_path, "mc.json", alg)], capsys)
    assert code == 0 and out["is_post_lie_deformation"]


def test_deform_trivialize(tmp_path, capsys):
    alg = json.loads((DATA / "split2.json").read_text())
    doc = _write(tmp_path, "d.json", {"algebra": alg})
    code, out = _run(["deform", doc, "--order", "3", "--seed", "1", "--trivialize"], capsys)
    assert code == 0 and out["valid"] and out["trivialize"]["reduced_is_undeformed"]
    code, out = _run(["deform", doc], capsys)
    assert code == 2


def test_deterministic_output(capsys):
    argv = ["deform", "-", "--order", "2", "--seed", "5"]
    texts = []
    for _ in range(2):
        alg = json.loads((DATA / "dual_numbers.json").read_text())
        sys.stdin = _Stdin(json.dumps({"algebra": alg}))
        try:
            run(argv)
        finally:
            sys.stdin = sys.__stdin__
        texts.append(capsys.readouterr().out)
    assert texts[0] == texts[1]
    assert json.loads(texts[0])["config_hash"] == json.loads(texts[1])["config_hash"]


class _Stdin:
    def __init__(self, text: str):
        self.text = text

    def read(self) -> str:
        return self.text


def test_console_script_stdin_and_threads(tmp_path):
    src = (GOLDEN / "uparrow.input.json").read_text()
    env = dict(os.environ, POSTLIE_THREADS="2")
    proc = subprocess.run([sys.executable, "-m", "postlie", "trees", "uparrow"], input=src,
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "uparrow.expected.json").read_text()
    env["POSTLIE_THREADS"] = "many"
    proc = subprocess.run([sys.executable, "-m", "postlie", "trees-verify", "--max-edges", "1",
                           "--max-decoration", "1", "--modes", "post_lie"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 2 and "POSTLIE_THREADS" in proc.stdout


def test_trees_verify_threads_agree(capsys, monkeypatch):
    argv = ["trees-verify", "--max-edges", "2", "--max-decoration", "1", "--modes",
            "post_lie,reconstruction"]
    code1, one = _run(argv, capsys)
    monkeypatch.setenv("POSTLIE_THREADS", "2")
    code2, two = _run(argv, capsys)
    assert code1 == code2 == 0
    assert one == two and one["holds"]


def test_trees_verify_mutations(capsys):
    code, out = _run(["trees-verify", "--max-edges", "2", "--max-decoration", "1",
                      "--modes", "post_lie,invariants", "--mutations"], capsys)
    assert code == 0
    assert all(m["detected"] for m in out["mutations"].values())
