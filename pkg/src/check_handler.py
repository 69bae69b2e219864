import argparse
from typing import Any, Dict, List, Optional

from loguru import logger

from handler_helpers import CommandContext, finish_execution_log, start_execution_log
from invariant_suites import SUITE_NAMES, run_suites
from models import SuiteReport, enable_execution_log_ctx


def _configure_check(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--suite", choices=["all"] + SUITE_NAMES, default="all",
                        help="invariant suite to run (default: all)")
    parser.add_argument("--json", action="store_true", help="print the report as canonical JSON")


def format_report(report: SuiteReport) -> str:
    """Plain-text pass/fail report, one line per check."""
    lines: List[str] = []
    if report.error:
        lines.append(f"ERROR {report.error.error_code}: {report.error.error_message}")
    for result in report.results:
        status = "PASS" if result.passed else "FAIL"
        line = f"{status} {result.suite}.{result.name} ({result.duration_ms} ms)"
        if result.detail:
            line += f": {result.detail}"
        lines.append(line)
    lines.append(f"{report.passed} passed, {report.failed} failed")
    return "\n".join(lines) + "\n"


class CheckHandler:
    """Handler running the seeded invariant suites."""

    def __init__(self, registry: Any, settings: Optional[Dict[str, Any]] = None):
        self.settings = settings if settings is not None else {}
        if registry is None:
            return
        self.registry = registry
        self.registry.command(
            name="check",
            description="Run the invariant suites and print a pass/fail report",
            configure=_configure_check,
        )(self.check)
        logger.info("Check Handler initialized")

    def check(self, ctx: CommandContext, args: argparse.Namespace) -> SuiteReport:
        enable_execution_log_ctx.set(self.settings.get("enable_execution_log", False))
        log, start_ms = start_execution_log("check", args.suite)
        names = SUITE_NAMES if args.suite == "all" else [args.suite]
        seed = int(ctx.config.get("check_seed") or 0)
        samples = int(ctx.config.get("check_samples") or 1)
        log.messages.append(f"suites={names} seed={seed} samples={samples}")

        report = run_suites(names, ctx.provider("rng_factory"), samples)
        for result in report.results:
            if not result.passed:
                log.warnings.append(f"{result.suite}.{result.name}: {result.detail}")
        log.metadata = {"passed": report.passed, "failed": report.failed}
        report.execution_log = finish_execution_log(log, start_ms)
        return report
