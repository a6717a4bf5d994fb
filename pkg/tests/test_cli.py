import json
from pathlib import Path

import pytest

from quartic_hasse.cli import cli_main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "paper-example"
EXAMPLE = "-1,17,89,257,769"


def run(capsys, *argv):
    code = cli_main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_certify_worked_example(capsys, tmp_path):
    path = tmp_path / "cert.json"
    code, out, _ = run(capsys, "certify", "--b", EXAMPLE, "--u", "auto", "--out", str(path))
    assert code == 0
    assert out.splitlines()[0] == (FIXTURES / "quartic.txt").read_text().strip()
    assert "bitangent_hasse_failure: True" in out
    code, out, _ = run(capsys, "recheck", str(path))
    assert code == 0 and "agrees with stored verdicts: True" in out


def test_certify_json(capsys):
    code, out, _ = run(capsys, "certify", "--json", "--b", EXAMPLE, "--u", "-1/197633", "--bound", "20")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdicts"]["sdr_hasse_failure"] is True


def test_certify_invalid_tuple(capsys):
    code, out, _ = run(capsys, "certify", "--b", "-1,5,89,257,769")
    assert code == 1
    assert "local-square at place 2" in out
    code, out, _ = run(capsys, "certify", "--json", "--b", "-1,3,89,257,769")
    assert code == 1
    assert any(f["check"] == "one-ramified-prime" for f in json.loads(out)["validation"]["failures"])


def test_classify(capsys):
    code, out, _ = run(capsys, "classify-ea32", "--ambient", "sp6")
    assert code == 0 and out.strip() == "6"
    code, out, _ = run(capsys, "classify-ea32", "--ambient", "u36")
    assert out.strip() == "0"


def test_check_place(capsys):
    code, out, _ = run(capsys, "check-place", "--b", EXAMPLE, "--p", "3")
    assert code == 0
    assert "generator (1, 1, 1, 1, 0)" in out
    assert "fixed odd forms" in out


def test_search_and_construct(capsys):
    code, out, _ = run(capsys, "search-params", "--bound", "769")
    assert code == 0 and out.startswith(f"b = {EXAMPLE}")
    code, out, _ = run(capsys, "search-params", "--bound", "30")
    assert code == 1
    code, out, _ = run(capsys, "construct", "--json", "--b", EXAMPLE)
    assert code == 0
    assert json.loads(out)["a6"] == "-1513"


def test_group_audit_quick(capsys):
    code, out, _ = run(capsys, "group-audit", "--quick")
    assert code == 0 and out.strip().endswith("PASS")


@pytest.mark.parametrize("argv", [
    ["certify", "--b", "1,2"],
    ["certify", "--b", "a,b,c,d,e"],
    ["certify", "--b", EXAMPLE, "--u", "x/y"],
    ["certify", "--b", EXAMPLE, "--u", "0"],
    ["check-place", "--b", EXAMPLE, "--p", "4"],
    ["classify-ea32", "--ambient", "u99"],
    ["frobnicate"],
    [],
])
def test_invalid_input_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_recheck_tampered_and_garbage(capsys, tmp_path):
    path = tmp_path / "cert.json"
    doc = json.loads((FIXTURES / "certificate.json").read_text())
    doc["geometry"]["smooth"] = False
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "recheck", str(path))
    assert code == 1 and "agrees with stored verdicts: False" in out
    path.write_text("not json")
    assert run(capsys, "recheck", str(path))[0] == 2
