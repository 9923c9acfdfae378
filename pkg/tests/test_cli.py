import json
import subprocess
import sys

import pytest

from tropikit import cli

GOLDEN = cli.golden_dir()


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def cases():
    return json.loads((GOLDEN / "cases.json").read_text())["cases"]


@pytest.mark.parametrize("case", cases(), ids=lambda c: c["name"])
def test_golden_case(case):
    code, text = cli.run_case(case["argv"], GOLDEN / "inputs")
    expected = json.loads((GOLDEN / "expected" / f"{case['name']}.json").read_text())
    assert code == expected["exit"]
    assert json.loads(text) == expected["report"]


def test_examples_command_is_byte_identical(capsys):
    code, out, _ = run(["examples"], capsys)
    rep = json.loads(out)
    assert code == 0, rep
    assert set(rep["cases"].values()) == {"identical"}


def test_examples_write(tmp_path, capsys):
    code, out, _ = run(["examples", "--write", tmp_path], capsys)
    assert code == 0
    for c in cases():
        assert (tmp_path / f"{c['name']}.json").read_text() == (GOLDEN / "expected" / f"{c['name']}.json").read_text()


def test_schema_errors_carry_json_pointers(tmp_path, capsys):
    doc = {"geometry": {"cross": 2}, "graph": {"vertices": [{"id": "a", "polytope": "00", "sort": "ball"}]}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, err = run(["graph", "validate", path], capsys)
    assert code == 2
    issues = json.loads(out)["issues"]
    assert issues[0]["pointer"] == "/graph/vertices/0/sort"
    assert "/graph/vertices/0/sort" in err


def test_unknown_polytope_pointer(tmp_path, capsys):
    doc = {"geometry": {"cross": 2}, "graph": {"vertices": [{"id": "a", "polytope": "zz"}]}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(["graph", "validate", path], capsys)
    assert code == 2
    assert json.loads(out)["issues"][0]["pointer"] == "/graph/vertices/0/polytope"


def test_invalid_json_and_missing_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{")
    assert run(["validate", path], capsys)[0] == 2
    assert run(["validate", tmp_path / "absent.json"], capsys)[0] == 2


def test_dimension_cap(monkeypatch, capsys):
    monkeypatch.setenv("TROPIKIT_MAX_DIM", "2")
    code, out, _ = run(["diagonal", GOLDEN / "inputs" / "p3.json"], capsys)
    assert code == 2 and "TROPIKIT_MAX_DIM" in out
    monkeypatch.setenv("TROPIKIT_MAX_DIM", "x")
    assert run(["diagonal", GOLDEN / "inputs" / "p2.json"], capsys)[0] == 2
    monkeypatch.delenv("TROPIKIT_MAX_DIM")
    assert run(["diagonal", GOLDEN / "inputs" / "p3.json"], capsys)[0] == 0


def test_text_format(capsys):
    code, out, _ = run(["graph", "symmetry", GOLDEN / "inputs" / "gamma1.json", "--format", "text"], capsys)
    assert code == 0
    assert "component_count: 3" in out.splitlines()


def test_bad_holonomy_and_eta(capsys):
    fiber = GOLDEN / "inputs" / "fiber-p2.json"
    assert run(["potential", fiber, "--holonomy", "1"], capsys)[0] == 2
    assert run(["potential", fiber, "--holonomy", "0,1"], capsys)[0] == 2
    assert run(["diagonal", GOLDEN / "inputs" / "p2.json", "--eta", "1,x"], capsys)[0] == 2


def test_split_needs_direction(tmp_path, capsys):
    doc = json.loads((GOLDEN / "inputs" / "split-cube.json").read_text())
    del doc["cone_direction"]
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(["split", "check", path], capsys)
    assert code == 2 and json.loads(out)["issues"][0]["pointer"] == "/cone_direction"
    assert run(["split", "check", path, "--eta", "1,1,0"], capsys)[0] == 0


def test_output_is_deterministic(capsys):
    argv = ["split", "cone", GOLDEN / "inputs" / "split-cube.json", "--seed", "5"]
    first = run(argv, capsys)[1]
    assert run(argv, capsys)[1] == first


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tropikit.cli", "graph", "symmetry", str(GOLDEN / "inputs" / "gamma2.json")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["component_count"] == 2
