from __future__ import annotations

import json
import subprocess
import sys

import jsonschema
import pytest

from iterforms import cli, schemas
from iterforms.forms import from_json
from iterforms.grading import ChartSpec
from iterforms.textio import parse_element


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_berezinian_text(capsys):
    code, out, _ = run_cli(capsys, "berezinian", "--k", "1", "--n", "1")
    assert code == 0 and out == "d[2]x1 ∧ D[1]x1"


def test_trace_text(capsys, tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps([["1", "2"], ["3", "4"]]))
    code, out, _ = run_cli(capsys, "trace", str(path))
    assert code == 0 and out == "5"


def test_homology_table(capsys):
    code, out, _ = run_cli(capsys, "homology", "--k", "1", "--n", "1", "--deg", "3")
    assert code == 0
    assert "H_1 = 1" in out.splitlines() and "H_0 = 0" in out.splitlines()


def test_global_flags_after_subcommand(capsys):
    code, out, _ = run_cli(capsys, "d", "--slot", "1", "x1*x2", "--n", "2")
    assert code == 0 and out == "x1*d[1]x2 + x2*d[1]x1"


def test_eval_examples(capsys):
    assert run_cli(capsys, "eval", "d1(x1^2)")[1] == "2*x1*d[1]x1"
    assert run_cli(capsys, "eval", "d[1]x1 * d[1]x1")[1] == "0"


def test_hatd_accepts_json_file(capsys, tmp_path):
    from iterforms.forms import to_json

    Z = parse_element("x1^2*D[]x1 + d[1]x1*D[1]x1", ChartSpec(1, 1))
    path = tmp_path / "z.json"
    path.write_text(json.dumps(to_json(Z)))
    code, out, _ = run_cli(capsys, "hatd", "--slot", "2", str(path))
    assert code == 0 and out == "1 - 2*x1"


COMMANDS = [
    ["eval", "x1*d[1]x1 + 1/2"],
    ["d", "--slot", "2", "x1*d[1]x1"],
    ["hatd", "--slot", "1", "x1*D[1]x1"],
    ["trace", '[["x1","1"],["0","x2"]]'],
    ["berezinian", "--k", "2", "--n", "1"],
    ["homology", "--k", "1", "--n", "1", "--deg", "2"],
    ["cohomology-window", "--k", "1", "--n", "1", "--deg", "1"],
    ["check", "--suite", "dual-basis"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=[c[0] for c in COMMANDS])
def test_json_output_is_schema_valid(capsys, argv):
    code, out, _ = run_cli(capsys, "--n", "2", "--format", "json", *argv)
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, schemas.BY_COMMAND[argv[0]])
    if argv[0] in ("eval", "d", "hatd"):
        assert str(from_json(data)) == data["text"]


@pytest.mark.parametrize("argv, code", [
    (["eval", "x1 +"], 1),
    (["eval", "d[5]x1"], 1),
    (["d", "--slot", "9", "x1"], 1),
    (["trace", "not-json"], 1),
    (["hatd", "--slot", "2", "x1"], 1),
])
def test_errors_are_structured(capsys, argv, code):
    got, out, err = run_cli(capsys, *argv)
    assert got == code and out == ""
    data = json.loads(err)
    jsonschema.validate(data, schemas.ERROR)
    assert data["error"]["exit_code"] == code


def test_resource_error_exit_code(capsys, monkeypatch):
    from iterforms.limits import LIMITS
    from iterforms.diffops import berezin_generator

    monkeypatch.setattr(LIMITS, "max_nu", 2)
    berezin_generator.cache_clear()
    try:
        code, _, err = run_cli(capsys, "berezinian", "--k", "3", "--n", "1")
    finally:
        berezin_generator.cache_clear()
    assert code == 2
    assert json.loads(err)["error"]["bound"] == "nu(k)"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "iterforms", "trace", '[["1","2"],["3","4"]]'],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "5"
