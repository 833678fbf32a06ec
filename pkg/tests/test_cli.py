import io
import json
from pathlib import Path

import pytest

from trilie.cli import main
from trilie.document import serialize_algebra
from trilie.families import example_algebra

GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), stdout=buf)
    return code, buf.getvalue()


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def test_validate_abelian(tmp_path):
    path = write(tmp_path, "ab.json", {"schema": 1, "dim": 3, "brackets": []})
    code, text = run("validate", "--input", path)
    assert code == 0
    assert text.rstrip().endswith("result: pass")


def test_example_output_strings():
    code, text = run("example", "manin16", "--analyze")
    assert code == 0
    for needle in [
        "dim B^1 = 12",
        "B^1 = <x1, x2, x5, x6, x7, x8, x9, x10, x13, x14, x15, x16>",
        "derived series: 2-solvable",
        "lower central series: non-nilpotent (stable at dim 12)",
        "abelian ideal dim 8",
        "B^(2) dim 4 = <x7, x8, x15, x16>",
    ]:
        assert needle in text


def test_output_is_deterministic():
    assert run("example", "manin16")[1] == run("example", "manin16")[1]


def test_stage_on_file_with_diagonal_derivation(tmp_path):
    path = write(tmp_path, "ex.json", serialize_algebra(example_algebra()))
    code, text = run("dual", "--input", path, "--derivation", "1,1,1,-1")
    assert code == 0 and "result: pass" in text
    code, text = run("dual", "--input", path, "--derivation", "1,1,-1,-1", "--format", "json")
    data = json.loads(text)
    assert code == 1 and not data["ok"]
    assert data["error"]["code"] == "NOT_DERIVATION"


def test_missing_derivation(tmp_path):
    path = write(tmp_path, "ex.json", serialize_algebra(example_algebra()))
    code, text = run("split", "--input", path)
    assert code == 1 and "MISSING_DERIVATION" in text


def test_json_output_is_valid():
    code, text = run("example", "manin16", "--format", "json")
    data = json.loads(text)
    assert code == 0 and data["ok"] is True


@pytest.mark.parametrize("doc,code", [
    ("{", "PARSE_ERROR"),
    ({"schema": 1, "dim": 4, "brackets": [{"a": 1, "b": 2, "c": 7, "coeffs": {"4": "1"}}]}, "INDEX_OUT_OF_RANGE"),
    ({"schema": 1, "dim": 4, "brackets": [{"a": 2, "b": 3, "c": 4, "coeffs": {"1": "1"}},
                                          {"a": 3, "b": 2, "c": 4, "coeffs": {"1": "1"}}]}, "SIGN_CONFLICT"),
    ({"schema": 1, "dim": 4, "brackets": [{"a": 1, "b": 2, "c": 3, "coeffs": {"4": "1"}},
                                          {"a": 1, "b": 2, "c": 4, "coeffs": {"1": "1"}}]}, "FI_VIOLATION"),
])
def test_error_exit_codes(tmp_path, doc, code):
    path = write(tmp_path, "bad.json", doc)
    status, text = run("validate", "--input", path, "--format", "json")
    assert status == 1
    assert json.loads(text)["error"]["code"] == code


def test_diff_table_matches_golden():
    code, text = run("diff-table")
    assert code == 0
    assert text == (GOLDEN / "diff_table.txt").read_text()


def test_strict_diff_fails():
    code, text = run("diff-table", "--strict")
    assert code == 1 and text.rstrip().endswith("result: FAIL")


def test_analyze_with_ideal(tmp_path):
    path = write(tmp_path, "ex.json", serialize_algebra(example_algebra()))
    code, text = run("analyze", "--input", path, "--ideal", "1,2")
    assert code == 0
    assert "derived series: 1-solvable" in text
