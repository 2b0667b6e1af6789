from __future__ import annotations

import json
import subprocess
import sys

import pytest

from pointfree.cli import run


def _json(capsys, argv):
    status = run([*argv, "--json-lines"])
    lines = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    return status, lines


def _section(lines, name):
    return [x for x in lines if x.get("section") == name]


def test_header_and_status(capsys, data_dir):
    status, lines = _json(capsys, ["site", "inner", "--file", str(data_dir / "sierpinski.site")])
    assert status == 0
    assert lines[0]["format"] == "pointfree-report" and lines[0]["version"] == 1
    assert lines[-1] == {"section": "status", "exit": 0}


def test_json_output_is_reproducible(capsys, data_dir):
    argv = ["inner", "equivalence", "--file", str(data_dir / "counting4.site")]
    _, first = _json(capsys, argv)
    _, second = _json(capsys, argv)
    assert first == second


def test_inner_almost_reports_witness(capsys, data_dir):
    status, lines = _json(capsys, ["inner", "almost", "--file", str(data_dir / "sierpinski.site")])
    text = json.dumps(lines)
    assert status == 0
    assert '"1"' in text and '"U"' in text


def test_counting_frame(capsys, data_dir):
    status, lines = _json(capsys, ["site", "frame", "--file", str(data_dir / "counting4.site")])
    frame = _section(lines, "frame")[0]
    assert status == 0 and frame["size"] == 16 and frame["boolean"] and len(frame["atoms"]) == 4


def test_sublocales(capsys, data_dir):
    status, lines = _json(capsys, ["frame", "sublocales", "--file", str(data_dir / "sierpinski.site")])
    assert status == 0
    assert _section(lines, "sublocales")[0]["count"] == 4
    kinds = sorted(x["kind"] for x in _section(lines, "sublocale"))
    assert kinds == ["closed+boolean", "open+boolean", "open+closed", "open+closed+boolean"]


@pytest.mark.parametrize("argv", [
    ["coin", "fatcantor", "--stages", "4", "--verify-complement"],
    ["lebesgue", "svc", "--k", "5"],
    ["fuzz", "equivalence", "--cases", "20"],
])
def test_fileless_verbs_succeed(capsys, argv):
    status, lines = _json(capsys, argv)
    assert status == 0, lines


@pytest.mark.parametrize("name,verb", [
    ("unit_square.region", ["lebesgue", "measure"]),
    ("unit_interval.region", ["lebesgue", "site", "--n", "2"]),
    ("unit_square.region", ["lebesgue", "shear", "--i", "1", "--j", "0", "--n", "6"]),
    ("unit_square.region", ["lebesgue", "translate", "--vector", "1/2,-3/4"]),
    ("glue.yaml", ["valuation", "glue"]),
    ("push.yaml", ["valuation", "push"]),
    ("sierpinski_collapsed.site", ["valuation", "quotient"]),
])
def test_file_verbs_succeed(capsys, data_dir, name, verb):
    status, lines = _json(capsys, [*verb, "--file", str(data_dir / name)])
    assert status == 0, lines


def test_cycle_is_a_failure_with_witness(capsys, data_dir):
    status, lines = _json(capsys, ["lattice", "check", "--file", str(data_dir / "cycle.site")])
    assert status == 1
    assert _section(lines, "failure")[0]["kind"] == "CycleError"


def test_bad_input_exit_two(capsys, tmp_path):
    bad = tmp_path / "bad.site"
    bad.write_text("elements: [0, 1\n")
    status, lines = _json(capsys, ["lattice", "check", "--file", str(bad)])
    assert status == 2
    assert "bad.site:" in _section(lines, "error")[0]["message"]
    floats = tmp_path / "float.site"
    floats.write_text("elements: [0, 1]\nleq: [[0, 1]]\nvaluation: {0: 0, 1: 0.5}\n")
    assert _json(capsys, ["valuation", "check", "--file", str(floats)])[0] == 2


def test_cap_exceeded_exit_two(capsys):
    assert _json(capsys, ["lebesgue", "svc", "--k", "21"])[0] == 2
    assert _json(capsys, ["lebesgue", "shear", "--n", "13"])[0] == 2


def test_text_mode(capsys, data_dir):
    assert run(["site", "inner", "--file", str(data_dir / "sierpinski.site")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# site inner") and "[status] exit 0" in out


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "pointfree.cli", "lebesgue", "svc", "--k", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "5/8" in proc.stdout
