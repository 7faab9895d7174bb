import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from krull_forge.cli import main

SCHEMA = json.loads(resources.files("krull_forge").joinpath("report.schema.json").read_text())
FAST = ["--samples", "20", "--bound", "50"]


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def report(argv, capsys):
    code, out, _ = run(argv + ["--json", "-"], capsys)
    start = out.index("{\n")
    return code, json.loads(out[start:]), out[start:]


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["realize", "--group", "Z/2"] + FAST, 0),
        (["realize", "--group", "0"] + FAST, 0),
        (["realize", "--group", "Z/one"], 2),
        (["realize", "--group", "Z/0"], 2),
        (["realize"], 2),
        (["realize", "--group", "Z", "--samples", "0"], 2),
        (["verify", "--suite", "stability"] + FAST, 0),
        (["verify", "--suite", "bogus"], 2),
        (["verify", "--suite", "orbit", "--adversarial", "identity"] + FAST, 0),
        (["verify", "--suite", "fixed-set", "--adversarial", "cycle:4"] + FAST, 0),
        (["verify", "--adversarial", "cycle:0"], 2),
        (["verify", "--adversarial", "cycle:13"], 2),
        (["verify", "--adversarial", "mirror"], 2),
        (["verify", "--group", "Q"], 2),
        (["demo", "--group", "Z/x"], 2),
        ([], 2),
    ],
)
def test_exit_codes(argv, expected, capsys):
    assert run(argv, capsys)[0] == expected


def test_realize_report_validates_against_schema(capsys):
    code, data, _ = report(["realize", "--group", "Z^2 x Z/4"] + FAST, capsys)
    assert code == 0
    jsonschema.validate(data, SCHEMA)
    assert data["class_group_of_T"]["text"] == "Z^2 x Z/4"
    assert data["class_group_of_T"]["matches_requested"] is True
    names = [s["name"] for s in data["suites"]]
    assert names == sorted(names)


def test_verify_report_validates_against_schema(capsys):
    code, data, _ = report(["verify", "--adversarial", "identity"] + FAST, capsys)
    assert code == 0
    jsonschema.validate(data, SCHEMA)
    by_name = {s["name"]: s for s in data["suites"]}
    assert by_name["orbit"]["verdict"] == "fail"
    assert by_name["orbit"]["details"]["control_matched"] is True
    assert by_name["stability"]["verdict"] == "pass"


def test_reports_are_deterministic_modulo_timings(capsys):
    argv = ["realize", "--group", "Z/6", "--seed", "3"] + FAST
    _, a, _ = report(argv, capsys)
    _, b, _ = report(argv, capsys)
    assert a.pop("timings").keys() == b.pop("timings").keys()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    _, c, _ = report(["realize", "--group", "Z/6", "--seed", "4"] + FAST, capsys)
    c.pop("timings")
    assert c != a


def test_json_written_to_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(["verify", "--suite", "order", "--json", str(path)] + FAST, capsys)
    assert code == 0 and "verdict: pass" in out
    jsonschema.validate(json.loads(path.read_text()), SCHEMA)


@pytest.mark.parametrize(
    "group, last",
    [("Z/2", "G(T) = Z/2"), ("Z", "G(T) = Z"), ("Z^2 x Z/4", "G(T) = Z^2 x Z/4"), ("0", "G(T) = 0")],
)
def test_demo_transcript(group, last, capsys):
    code, out, _ = run(["demo", "--group", group], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and lines[-1] == last
    assert run(["demo", "--group", group], capsys)[1] == out


def test_demo_trivial_group_notes(capsys):
    _, out, _ = run(["demo", "--group", "0"], capsys)
    assert "trivial" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "krull_forge", "verify", "--suite", "bogus"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2 and "unknown suite" in proc.stderr
