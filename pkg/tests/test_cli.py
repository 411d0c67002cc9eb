import json

import pytest
from click.testing import CliRunner

import oracles
from recurrify.cli import main


@pytest.fixture
def invoke():
    runner = CliRunner()

    def call(*args, env=None):
        return runner.invoke(main, list(args), env=env, catch_exceptions=False)
    return call


@pytest.fixture
def program_file(tmp_path):
    path = tmp_path / "count.src"
    path.write_text(
        "def count = fun count (xs : list int) : list int =>\n"
        "  caselist xs of nil => nil | cons(y, ys) => cons(y, tick (count ys));\n"
        "main = count [5, 6, 7];\n", encoding="utf-8")
    return path


def json_lines(output):
    return [json.loads(line) for line in output.splitlines() if line.strip()]


def test_run_bundled_program(invoke):
    result = invoke("run", "mergesort")
    assert result.exit_code == 0
    assert result.output.splitlines() == ["value: [1, 2, 3]", "cost: 2", "complete: yes"]


def test_run_with_custom_main(invoke):
    result = invoke("--json", "run", "mergesort", "--main", "merge ([1, 3], [2, 4])")
    record = json_lines(result.output)[0]
    assert record == {"complete": True, "value": "[1, 2, 3, 4]", "cost": 3}


def test_run_out_of_fuel(invoke):
    result = invoke("--json", "run", "misc", "--fuel", "1000")
    assert result.exit_code == 0
    assert json_lines(result.output)[0]["complete"] is False


def test_run_user_file(invoke, program_file):
    result = invoke("run", str(program_file))
    assert result.exit_code == 0, result.output
    assert "cost: 3" in result.output


def test_extract_forms(invoke):
    plain = invoke("extract", "misc", "nil_list").output.strip()
    assert invoke("extract", "misc", "nil_list", "--simplify").output.strip() == "val nil"
    assert plain != "val nil"
    recurrence = invoke("extract", "mergesort", "msort", "--recurrence").output
    assert "split" in recurrence and "merge" in recurrence
    typed = invoke("extract", "mergesort", "split", "--types").output
    assert "list" in typed


def test_extract_json(invoke):
    record = json_lines(invoke("--json", "extract", "misc", "tiny").output)[0]
    assert record == {"name": "tiny", "recurrence": "incr (val ())"}


def test_analyze_table(invoke):
    result = invoke("analyze", "mergesort", "msort", "--sizes", "0..8", "--cross-check")
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0].split() == ["size", "semantic_cost", "semantic_potential", "actual_max_cost",
                                "widened"]
    assert [int(line.split()[1]) for line in lines[1:]] == \
        [oracles.msort_cost_model(size) for size in range(9)]


def test_analyze_json_rows(invoke):
    result = invoke("--json", "analyze", "quicksort", "qsort", "--sizes", "0..6",
                    "--product-mode", "powerset", "--cross-check")
    rows = json_lines(result.output)
    assert [row["size"] for row in rows] == list(range(7))
    expected = [oracles.qsort_powerset(size) for size in range(7)]
    assert [row["semantic_cost"] for row in rows] == expected
    assert all(row["actual_max_cost"] == row["semantic_cost"] for row in rows)
    assert not any(row["widened"] for row in rows)


def test_analyze_two_lists(invoke):
    rows = json_lines(invoke("--json", "analyze", "mergesort", "merge", "--sizes", "0..2").output)
    assert len(rows) == 9
    assert {tuple(row["size"]): row["semantic_cost"] for row in rows}[(2, 2)] == 3


def test_analyze_reports_widening(invoke):
    rows = json_lines(invoke("--json", "analyze", "mergesort", "msort", "--sizes", "6",
                             "--fix-fuel", "1").output)
    assert rows[0]["widened"] is True


def test_check_commands_exit_zero(invoke):
    result = invoke("check", "model-axioms", "--trials", "10")
    assert result.exit_code == 0 and "ok" in result.output
    result = invoke("--json", "check", "lemmas", "--trials", "10")
    assert json_lines(result.output)[0]["ok"] is True
    assert invoke("check", "soundness", "--trials", "5", "--max-length", "2").exit_code == 0
    assert invoke("check", "adequacy", "--corpus", "2").exit_code == 0


def test_violation_exits_one(invoke, monkeypatch):
    from recurrify import cli
    from recurrify.analyze import AnalysisRow

    monkeypatch.setattr(cli, "analyze",
                        lambda *args: [AnalysisRow(0, 0, "0", actual_max_cost=1)])
    result = invoke("analyze", "mergesort", "msort", "--sizes", "0")
    assert result.exit_code == 1 and "VIOLATION" in result.output


@pytest.mark.parametrize("args", [
    ("run", "no_such_file.src"),
    ("extract", "mergesort", "no_such_definition"),
    ("analyze", "mergesort", "msort", "--sizes", "5..2"),
    ("analyze", "mergesort", "msort", "--sizes", "many"),
    ("run", "mergesort", "--main", "msort ()"),
])
def test_usage_errors_exit_two(invoke, args):
    assert invoke(*args).exit_code == 2


def test_parse_error_exits_two(invoke, tmp_path):
    bad = tmp_path / "bad.src"
    bad.write_text("let = ;", encoding="utf-8")
    result = invoke("run", str(bad))
    assert result.exit_code == 2 and "parse error" in result.output


def test_seed_variable_overrides_option(invoke, monkeypatch):
    from recurrify import cli
    from recurrify.checks import CheckReport

    seen = []

    def fake_axioms(trials, seed):
        seen.append(seed)
        return CheckReport("model-axioms")

    monkeypatch.setattr(cli, "check_model_axioms", fake_axioms)
    invoke("check", "model-axioms", "--seed", "3", env={"RECURRIFY_SEED": "41"})
    invoke("check", "model-axioms", "--seed", "3")
    assert seen == [41, 3]
    assert invoke("check", "model-axioms", env={"RECURRIFY_SEED": "x"}).exit_code == 2
