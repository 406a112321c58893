import json

import pytest
from click.testing import CliRunner

from superko.cli import main
from superko.clifford import direct_sum, irreducible_graded_modules
from superko.suites import KO_EXPECTED


@pytest.fixture
def runner():
    return CliRunner()


def _json(result):
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


def test_ko_table_default_range(runner):
    rows = _json(runner.invoke(main, ["ko-table"]))["rows"]
    assert [r["n"] for r in rows] == list(range(8))
    assert tuple(r["group"] for r in rows) == KO_EXPECTED


def test_ko_table_negative_degrees_periodic(runner):
    neg = _json(runner.invoke(main, ["ko-table", "--n-range", "-8:-1"]))["rows"]
    pos = _json(runner.invoke(main, ["ko-table", "--n-range", "0:7"]))["rows"]
    assert [r["group"] for r in neg] == [r["group"] for r in pos]


def test_ko_table_markdown_agrees_with_json(runner):
    rows = _json(runner.invoke(main, ["ko-table", "--format", "json"]))["rows"]
    md = runner.invoke(main, ["ko-table", "--format", "markdown"])
    assert md.exit_code == 0
    body = md.output.strip().splitlines()[2:]
    assert [line.split("|")[2].strip() for line in body] == [r["group"] for r in rows]


def test_ko_table_complex(runner):
    rows = _json(runner.invoke(main, ["ko-table", "--field", "C", "--n-range", "0:3"]))["rows"]
    assert [r["group"] for r in rows] == ["Z", "0", "Z", "0"]


@pytest.mark.parametrize("bad", ["5:2", "x:y", "0:99"])
def test_ko_table_bad_range(runner, bad):
    assert runner.invoke(main, ["ko-table", "--n-range", bad]).exit_code == 2


def test_tate(runner):
    out = _json(runner.invoke(main, ["tate", "--n", "0", "--k-min", "-2", "--k-max", "2"]))
    assert [r["k"] for r in out["rows"]] == [-2, -1, 0, 1, 2]
    assert {r["group"] for r in out["rows"]} == {"Z"}


def test_tate_violation_exits_one(runner, tmp_path):
    bad = tmp_path / "levels.json"
    bad.write_text(json.dumps({"k0": -1, "levels": {"-3": 1}}))
    res = runner.invoke(main, ["tate", "--n", "0", "--input", str(bad)])
    assert res.exit_code == 1


def test_tate_empty_window(runner):
    assert runner.invoke(main, ["tate", "--n", "0", "--k-min", "3", "--k-max", "1"]).exit_code == 2


def test_pi0(runner):
    out = _json(runner.invoke(main, ["pi0", "--n", "1", "--dim-cap", "6"]))
    assert out["components"] == 2


def test_pi0_unstable_input_exits_two(runner, tmp_path):
    small, _ = direct_sum(irreducible_graded_modules(1))
    path = tmp_path / "amb.json"
    path.write_text(json.dumps(small.to_json()))
    res = runner.invoke(main, ["pi0", "--n", "1", "--input", str(path)])
    assert res.exit_code == 2
    res = runner.invoke(main, ["pi0", "--n", "2", "--input", str(path)])
    assert res.exit_code == 2


def test_verify_single_suite(runner):
    out = _json(runner.invoke(main, ["verify", "grassmann", "--seed", "3"]))
    assert out["passed"] and out["seed"] == 3
    assert [s["suite"] for s in out["suites"]] == ["grassmann"]


def test_verify_seed_from_env(runner):
    a = runner.invoke(main, ["verify", "grassmann"], env={"SUPERKO_SEED": "11"})
    b = runner.invoke(main, ["verify", "grassmann", "--seed", "11"])
    assert a.exit_code == b.exit_code == 0
    assert a.output == b.output


def test_verify_unknown_suite(runner):
    assert runner.invoke(main, ["verify", "nope"]).exit_code == 2


def test_output_file(runner, tmp_path):
    path = tmp_path / "table.md"
    res = runner.invoke(main, ["ko-table", "--format", "markdown", "--output", str(path)])
    assert res.exit_code == 0 and res.output == ""
    assert "Z/2" in path.read_text()


def test_version(runner):
    res = runner.invoke(main, ["--version"])
    assert res.exit_code == 0 and "0.1.0" in res.output
