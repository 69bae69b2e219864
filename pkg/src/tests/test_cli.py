import json
import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import cli  # noqa: E402
from errors import EXIT_MATH_DOMAIN, EXIT_OK, EXIT_VALIDATION  # noqa: E402


def test_version(capsys):
    assert cli.run(["--version"]) == EXIT_OK
    assert cli.PROGRAM_VERSION in capsys.readouterr().out


def test_no_command():
    assert cli.run([]) == EXIT_VALIDATION


def test_unknown_command(capsys):
    assert cli.run(["nope"]) == EXIT_VALIDATION
    err = json.loads(capsys.readouterr().err)
    assert err["error_code"] == "InvalidParameter"


def test_theta_writes_output(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert cli.run(["theta", "fixture:e4", "-o", str(out)]) == EXIT_OK
    result = json.loads(capsys.readouterr().out)
    assert result["command"] == "theta"
    assert "execution_log" not in result
    with open(out, "r", encoding="utf-8") as f:
        text = f.read()
    assert text.endswith("\n")
    assert json.loads(text)["n"] == 1


def test_execution_log_flag(tmp_path, capsys):
    out = tmp_path / "f.json"
    code = cli.run(["--enable-execution-log", "frobenius", "fixture:one_plus_q", "--p", "3", "-o", str(out)])
    assert code == EXIT_OK
    result = json.loads(capsys.readouterr().out)
    assert result["execution_log"]["tool_call_id"].startswith("frobenius_one_plus_q_")


def test_output_is_deterministic(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    cli.run(["theta", "fixture:n2_mixed", "--power", "2", "-o", str(first)])
    cli.run(["theta", "fixture:n2_mixed", "--power", "2", "-o", str(second)])
    assert first.read_bytes() == second.read_bytes()


def test_ks_table(tmp_path):
    out = tmp_path / "ks.json"
    assert cli.run(["ks-table", "--n", "2", "--d", "1", "--point", "fixture:point_n2", "-o", str(out)]) == EXIT_OK


def test_math_domain_exit_code(tmp_path, capsys):
    point = tmp_path / "p.json"
    point.write_text(json.dumps({"d": 1, "matrix": [[["0/1", "-1/1"]]]}), encoding="utf-8")
    code = cli.run(["--log-level", "CRITICAL", "ks-table", "--n", "1", "--d", "1", "--point", str(point),
                    "-o", str(tmp_path / "ks.json")])
    assert code == EXIT_MATH_DOMAIN
    assert json.loads(capsys.readouterr().err)["error_code"] == "MathDomainError"


def test_bad_projector_choice():
    assert cli.run(["theta", "fixture:e4", "--project", "alt", "-o", "x.json"]) == EXIT_VALIDATION


def test_invalid_setting_from_environment(monkeypatch):
    monkeypatch.setenv("THETA_LAB_CHECK_SAMPLES", "0")
    assert cli.run(["check", "--suite", "unitary"]) == EXIT_VALIDATION


def test_check_json(capsys):
    assert cli.run(["--samples", "2", "check", "--suite", "unitary", "--json"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] == 2 and report["failed"] == 0


def test_check_text(capsys):
    assert cli.run(["--samples", "2", "--seed", "5", "check", "--suite", "weights"]) == EXIT_OK
    assert capsys.readouterr().out.endswith("5 passed, 0 failed\n")


@pytest.mark.slow
def test_check_all(capsys):
    assert cli.run(["--samples", "3", "check"]) == EXIT_OK


def test_check_all_suites_exit_zero(capsys):
    assert cli.run(["--samples", "1", "check", "--suite", "all", "--json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["failed"] == 0
