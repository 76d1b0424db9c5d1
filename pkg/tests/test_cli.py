import json

import pytest
from typer.testing import CliRunner

from auxcheck.cli import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, app
from auxcheck.explorer import Verdict

runner = CliRunner()


@pytest.fixture
def invoke(tmp_path):
    """Run the CLI logging only to a file under the test's temporary directory."""
    def run(*args: str):
        return runner.invoke(app, ["--log-file", str(tmp_path / "auxcheck.log"), "--no-console-log", *args])
    yield run


@pytest.fixture
def two_writers_config(tmp_path):
    path = tmp_path / "two_writers.json"
    path.write_text(json.dumps({"substitutions": {"Writers": ["w1", "w2"]}, "constraint": {"MaxWrites": 1}}))
    yield path


def test_list(invoke):
    result = invoke("list")
    assert result.exit_code == EXIT_PASS, result.output
    for name in ("MinMax1", "SendInt1P", "HourS", "AfekSimplifiedH"):
        assert name in result.stdout


def test_list_one_spec(invoke):
    result = invoke("list", "MinMax2H")
    assert result.exit_code == EXIT_PASS
    assert "to-MinMax1" in result.stdout
    assert "h-bounds" in result.stdout


def test_list_unknown_spec(invoke):
    assert invoke("list", "MinMax9").exit_code == EXIT_ERROR


def test_passing_check_exits_zero(invoke):
    result = invoke("check-invariant", "--spec", "Hour", "--inv", "h-in-range")
    assert result.exit_code == EXIT_PASS, result.output
    assert "pass" in result.stdout


def test_failing_refinement_exits_one(invoke, two_writers_config):
    result = invoke("check-refinement", "-s", "AfekSimplified", "-m", "naive-to-LinearSnapshot",
                    "-c", str(two_writers_config))
    assert result.exit_code == EXIT_FAIL, result.output
    assert "Counterexample trace" in result.stdout


def test_found_trace_exits_one_with_json(invoke):
    result = invoke("find-trace", "-s", "Hour", "-t", "h=23", "--json")
    assert result.exit_code == EXIT_FAIL
    verdict = Verdict.from_json(result.stdout)
    assert len(verdict.trace) == 24
    assert verdict.trace[-1].state["h"] == 23


@pytest.mark.parametrize("args", [
    ("check-invariant", "-s", "Hour", "-i", "h-is-negative"),
    ("check-refinement", "-s", "MinMax7", "-m", "to-MinMax2"),
    ("check-proph-conditions", "-s", "SendSet"),
    ("check-history", "-s", "MinMax2"),
])
def test_errors_exit_two(invoke, args):
    result = invoke(*args)
    assert result.exit_code == EXIT_ERROR, result.output
    assert "ERROR" in result.stdout


def test_malformed_config_exits_two(invoke, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{\"substitutions\": ")
    result = invoke("check-invariant", "-s", "Hour", "-i", "h-in-range", "-c", str(path))
    assert result.exit_code == EXIT_ERROR


def test_state_cap_exits_two(invoke):
    result = invoke("check-invariant", "-s", "HourMin", "-i", "m-in-range", "--state-cap", "100")
    assert result.exit_code == EXIT_ERROR


def test_condition_commands(invoke):
    assert invoke("check-proph-conditions", "-s", "SendInt1P").exit_code == EXIT_PASS
    assert invoke("check-stutter-conditions", "-s", "HourS").exit_code == EXIT_PASS
    assert invoke("check-history", "-s", "MinMax2H").exit_code == EXIT_PASS
    assert invoke("check-action-prop", "-s", "SendInt1", "-p", "send-predictable").exit_code == EXIT_PASS
    assert invoke("check-equivalence", "-s", "MinMax2H", "-m", "to-MinMax2HCoarse",
                  "--back", "to-MinMax2H").exit_code == EXIT_PASS


def test_run_suite_selected_cases(invoke):
    result = invoke("run-suite", "--case", "HourS => HourMin", "--case", "HourS stutter conditions")
    assert result.exit_code == EXIT_PASS, result.output


def test_unknown_log_level(invoke):
    assert invoke("--log-level", "LOUD", "list").exit_code != EXIT_PASS
