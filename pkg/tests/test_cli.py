import json

import pytest

from helpers import FIXTURES
from sewcalc.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def fx(name):
    return FIXTURES / name


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", "--in", fx("merges.json"), "--context", fx("ctx.json"), "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert body["status"] == "ok"
    assert body["diagrams"][0]["census"] == [0, 0, 1]
    assert body["diagrams"][0]["degree_shift"] == -4


def test_compose(capsys):
    code, out, _ = run(capsys, "compose", "--in", fx("merges.json"), "coproduct", "product")
    assert code == 0
    assert json.loads(out)["target"] == [["I", "L"], ["K", "J"]]


def test_decompose_and_canonical(capsys):
    code, out, _ = run(capsys, "decompose", "--in", fx("merges.json"), "--diagram", "merge_after_cut")
    assert code == 0 and out.count("\n") == 2 and "coproduct" in out and "product" in out
    code, out, _ = run(capsys, "canonical", "--in", fx("cascades.json"), "--diagram", "cascade", "--format", "json")
    assert [d["name"] for d in json.loads(out)["diagrams"]] == ["cascade.products", "cascade.saddles", "cascade.coproducts"]


def test_equivalent_verdicts(capsys):
    code, out, _ = run(capsys, "equivalent", "--in", fx("cascades.json"), "cascade", "cascade_slid", "--strict")
    assert code == 0 and out.strip() == "equivalent"
    code, out, _ = run(capsys, "equivalent", "--in", fx("merges.json"), "merge_after_cut", "coproduct", "--strict")
    assert code == 1 and out.strip() == "not equivalent"
    code, _, _ = run(capsys, "equivalent", "--in", fx("merges.json"), "merge_after_cut", "coproduct")
    assert code == 0


def test_normalize_matches_across_isotopy(capsys):
    code, out, _ = run(capsys, "normalize", "--in", fx("merges.json"), "--format", "json")
    digests = {d["name"]: d["digest"] for d in json.loads(out)["diagrams"]}
    assert digests["merge_after_cut"] == digests["merge_late"]


def test_analyze_vanishing_is_strict(capsys):
    args = ["analyze", "--in", fx("discs.json"), "--diagram", "four_arcs"]
    code, out, _ = run(capsys, *args, "--context", fx("ctx_k2k3_empty.json"), "--strict")
    assert code == 1 and "vanishes: yes" in out
    code, out, _ = run(capsys, *args, "--context", fx("ctx.json"), "--strict")
    assert code == 0 and "vanishes: no" in out


def test_analyze_inline_context(capsys):
    code, out, _ = run(capsys, "analyze", "--in", fx("chains.json"), "--diagram", "chain", "--format", "json")
    (item,) = json.loads(out)["diagrams"]
    assert item["report"]["target"][0]["members"][0]["labels"] == ["I", "K", "Q"]


def test_classify(capsys):
    assert run(capsys, "classify", "--windows", "1", "--closed-out", "1")[1].strip() == "CaseI"
    assert run(capsys, "classify", "--open", "in,out;in")[1].strip() == "CaseIV_V"
    assert run(capsys, "classify", "--in", fx("signature.json"))[1].strip() == "CaseIV_V"
    code, out, _ = run(capsys, "classify", "--genus", "2", "--closed-out", "1", "--strict")
    assert code == 1 and out.strip() == "Vanishes"


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--open", "in"],
        ["analyze", "--in", "missing.json", "--context", "ctx.json"],
        ["analyze", "--in", "merges.json"],
        ["equivalent", "--in", "merges.json", "merge_after_cut", "nope"],
        ["decompose", "--in", "merges.json"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    argv = [str(fx(a)) if a.endswith(".json") else a for a in argv]
    code, out, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error: ") and not out


def test_compose_failure_is_reported(capsys, tmp_path):
    body = {
        "diagrams": [
            {"name": "a", "kind": "sewing", "edges": [["I", "J"]], "moves": []},
            {"name": "b", "kind": "sewing", "edges": [["K", "L"]], "moves": []},
        ]
    }
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(body))
    code, _, err = run(capsys, "compose", "--in", path, "a", "b")
    assert code == 2 and "not-composable" in err
