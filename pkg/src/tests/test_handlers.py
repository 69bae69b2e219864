import argparse
import json
import os
import sys

import pytest

# 添加 src 目录到 Python 路径
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from check_handler import CheckHandler, format_report  # noqa: E402
from errors import EXIT_MATH_DOMAIN, EXIT_VALIDATION  # noqa: E402
from handler_helpers import CommandContext  # noqa: E402
from ks_handler import KSHandler  # noqa: E402
from maass_handler import MaassHandler  # noqa: E402
from models import CheckResult, SuiteReport  # noqa: E402
from runtime_provider import ThetaLabRuntimeProvider  # noqa: E402
from theta_handler import ThetaHandler  # noqa: E402


class FakeRegistry:
    def __init__(self):
        self.commands = {}
        self.parsers = {}

    def command(self, name: str = None, description: str = None, configure=None):
        def decorator(func):
            parser = argparse.ArgumentParser(prog=name)
            if configure:
                configure(parser)
            self.parsers[name] = parser
            self.commands[name] = func
            return func
        return decorator


@pytest.fixture
def ctx():
    provider = ThetaLabRuntimeProvider()
    config = {"check_seed": 7, "check_samples": 2, "precision": 32}
    return CommandContext({"config": config, "providers": provider.initialize_providers(config)})


def run_command(handler_cls, name, argv, ctx):
    registry = FakeRegistry()
    handler_cls(registry, {"enable_execution_log": True})
    args = registry.parsers[name].parse_args(argv)
    return registry.commands[name](ctx, args)


def read_json(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_json(path, data):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f)
    return str(path)


def test_handlers_register_commands():
    registry = FakeRegistry()
    ThetaHandler(registry)
    MaassHandler(registry)
    KSHandler(registry)
    CheckHandler(registry)
    assert set(registry.commands) == {"theta", "frobenius", "derive", "integral", "maass", "holpart", "ks-table",
                                      "check"}


def test_handler_without_registry():
    handler = ThetaHandler(None, {"enable_execution_log": False})
    assert handler.settings == {"enable_execution_log": False}


class TestThetaCommands:
    def test_theta_e4(self, ctx, tmp_path):
        out = tmp_path / "theta.json"
        result = run_command(ThetaHandler, "theta", ["fixture:e4", "-o", str(out)], ctx)
        assert result.exit_code == 0
        assert result.summary["degree"] == [1, 1]
        data = read_json(out)
        assert data["degree"] == [1, 1]
        assert result.execution_log.tool_call_id.startswith("theta_")

    def test_theta_det_projector(self, ctx, tmp_path):
        out = tmp_path / "det.json"
        result = run_command(ThetaHandler, "theta",
                             ["fixture:n2_diag12", "--power", "2", "--project", "det", "-o", str(out)], ctx)
        assert result.exit_code == 0
        assert result.summary["degree"] == [2, 2]

    def test_user_projector(self, ctx, tmp_path):
        projector = write_json(tmp_path / "p.json", {"n": 1, "d": 1, "e": 1,
                                                      "entries": [{"row": 0, "col": 0, "c": ["1/1", "0/1"]}]})
        out = tmp_path / "user.json"
        result = run_command(ThetaHandler, "theta",
                             ["fixture:e4", "--project", "user", "--projector", projector, "-o", str(out)], ctx)
        assert result.exit_code == 0

    def test_user_projector_wrong_n(self, ctx, tmp_path):
        projector = write_json(tmp_path / "p.json", {"n": 2, "d": 1, "e": 1, "entries": []})
        result = run_command(ThetaHandler, "theta",
                             ["fixture:e4", "--project", "user", "--projector", projector, "-o",
                              str(tmp_path / "x.json")], ctx)
        assert result.exit_code == EXIT_VALIDATION
        assert result.error.error_code == "ShapeMismatch"

    def test_user_projector_needs_file(self, ctx, tmp_path):
        result = run_command(ThetaHandler, "theta",
                             ["fixture:e4", "--project", "user", "-o", str(tmp_path / "x.json")], ctx)
        assert result.exit_code == EXIT_VALIDATION

    def test_frobenius(self, ctx, tmp_path):
        out = tmp_path / "frob.json"
        result = run_command(ThetaHandler, "frobenius", ["fixture:one_plus_q", "--p", "3", "-o", str(out)], ctx)
        assert result.exit_code == 0
        assert result.summary["trace_bound"] == 9
        assert result.summary["terms"] == 2

    def test_frobenius_not_prime(self, ctx, tmp_path):
        result = run_command(ThetaHandler, "frobenius",
                             ["fixture:one_plus_q", "--p", "9", "-o", str(tmp_path / "x.json")], ctx)
        assert result.exit_code == EXIT_VALIDATION

    def test_derive(self, ctx, tmp_path):
        out = tmp_path / "d.json"
        result = run_command(ThetaHandler, "derive", ["fixture:n2_mixed", "--gamma", "fixture:gamma_n2",
                                                      "-o", str(out)], ctx)
        assert result.exit_code == 0
        assert result.summary["n"] == 2

    def test_integral(self, ctx):
        result = run_command(ThetaHandler, "integral", ["fixture:e4", "--p", "5"], ctx)
        assert result.exit_code == 0
        assert result.summary["integral"] == {"v": True, "vbar": True}

    def test_integral_mixed_valuations(self, ctx, tmp_path):
        # (2 - w)/5 has valuation 0 at one prime above 5 and -1 at the other
        series = write_json(tmp_path / "f.json", {
            "n": 1, "d": 1, "trace_bound": 1, "degree": [0, 0],
            "coefficients": [{"h": [[["1/1", "0/1"]]], "c": [{"wm": [], "wp": [], "c": ["2/5", "-1/5"]}]}],
        })
        result = run_command(ThetaHandler, "integral", [series, "--p", "5"], ctx)
        assert sorted(result.summary["integral"].values()) == [False, True]

    def test_integral_inert_prime(self, ctx):
        result = run_command(ThetaHandler, "integral", ["fixture:e4", "--p", "3"], ctx)
        assert result.error.error_code == "PrimeNotSplit"

    def test_missing_input(self, ctx, tmp_path):
        result = run_command(ThetaHandler, "theta", [str(tmp_path / "nope.json"), "-o", str(tmp_path / "x.json")],
                             ctx)
        assert result.exit_code == EXIT_VALIDATION
        assert result.error.error_code == "InvalidInput"

    def test_unknown_fixture(self, ctx, tmp_path):
        result = run_command(ThetaHandler, "theta", ["fixture:e99", "-o", str(tmp_path / "x.json")], ctx)
        assert result.error.error_code == "InvalidInput"


class TestMaassCommands:
    def test_maass_from_qexpansion(self, ctx, tmp_path):
        out = tmp_path / "m.json"
        result = run_command(MaassHandler, "maass", ["fixture:e4", "--k", "4", "-o", str(out)], ctx)
        assert result.exit_code == 0
        assert result.summary["k"] == 6
        assert result.summary["y_degree"] == 1

    def test_maass_needs_weight(self, ctx, tmp_path):
        result = run_command(MaassHandler, "maass", ["fixture:e4", "-o", str(tmp_path / "m.json")], ctx)
        assert result.exit_code == EXIT_VALIDATION

    def test_maass_rejects_n2(self, ctx, tmp_path):
        result = run_command(MaassHandler, "maass", ["fixture:n2_mixed", "--k", "2", "-o", str(tmp_path / "m.json")],
                             ctx)
        assert result.error.error_code == "ShapeMismatch"

    def test_iterate_then_holpart(self, ctx, tmp_path):
        form = tmp_path / "m.json"
        run_command(MaassHandler, "maass", ["fixture:delta", "--k", "12", "--iterate", "2", "-o", str(form)], ctx)
        assert read_json(form)["k"] == 16
        out = tmp_path / "h.json"
        result = run_command(MaassHandler, "holpart", [str(form), "-o", str(out)], ctx)
        assert result.exit_code == 0
        assert result.summary["n"] == 1

    def test_weight_disagrees(self, ctx, tmp_path):
        form = write_json(tmp_path / "f.json", {"k": 2, "d": 1, "trace_bound": 2,
                                                 "terms": [{"y": 0, "m": 1, "c": ["1/1", "0/1"]}]})
        result = run_command(MaassHandler, "maass", [form, "--k", "4", "-o", str(tmp_path / "x.json")], ctx)
        assert result.exit_code == EXIT_VALIDATION


class TestKSCommand:
    def test_table_n2(self, ctx, tmp_path):
        out = tmp_path / "ks.json"
        result = run_command(KSHandler, "ks-table", ["--n", "2", "--d", "1", "--point", "fixture:point_n2",
                                                     "-o", str(out)], ctx)
        assert result.exit_code == 0
        data = read_json(out)
        assert data["kernel_ok"] is True
        assert data["non_vacuous"] == "dz_11"
        assert data["table"][0][2] == "dz_11"
        assert data["table"][0][0] is None

    def test_size_mismatch(self, ctx, tmp_path):
        result = run_command(KSHandler, "ks-table", ["--n", "1", "--d", "1", "--point", "fixture:point_n2",
                                                     "-o", str(tmp_path / "ks.json")], ctx)
        assert result.error.error_code == "ShapeMismatch"

    def test_field_mismatch(self, ctx, tmp_path):
        result = run_command(KSHandler, "ks-table", ["--n", "1", "--d", "2", "--point", "fixture:point_n1",
                                                     "-o", str(tmp_path / "ks.json")], ctx)
        assert result.exit_code == EXIT_VALIDATION

    def test_point_outside_hn(self, ctx, tmp_path):
        point = write_json(tmp_path / "p.json", {"d": 1, "matrix": [[["1/1", "0/1"]]]})
        result = run_command(KSHandler, "ks-table", ["--n", "1", "--d", "1", "--point", point,
                                                     "-o", str(tmp_path / "ks.json")], ctx)
        assert result.exit_code == EXIT_MATH_DOMAIN


class TestCheckCommand:
    def test_single_suite(self, ctx):
        report = run_command(CheckHandler, "check", ["--suite", "unitary"], ctx)
        assert report.failed == 0
        assert report.passed == 2
        assert report.execution_log.metadata == {"passed": 2, "failed": 0}

    def test_format_report(self):
        report = SuiteReport(suites=["x"], passed=1, failed=1, results=[
            CheckResult(suite="x", name="a", passed=True, duration_ms=3),
            CheckResult(suite="x", name="b", passed=False, detail="broken", duration_ms=4),
        ])
        text = format_report(report)
        assert "PASS x.a (3 ms)" in text
        assert "FAIL x.b (4 ms): broken" in text
        assert text.endswith("1 passed, 1 failed\n")
