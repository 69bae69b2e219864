"""theta-lab command-line entry point.

Every subcommand is a pure file -> file transform: it reads JSON (a path or
``fixture:<name>``), applies one operator family and writes canonical JSON.
Exit codes: 0 success, 1 validation or shape error, 2 math-domain error.
"""

import argparse
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from dotenv import load_dotenv
from loguru import logger
from pydantic import ValidationError

from check_handler import CheckHandler, format_report
from config import Configs
from errors import EXIT_OK, EXIT_VALIDATION, ParameterError, ThetaLabError, exit_code_for
from handler_helpers import CommandContext
from ks_handler import KSHandler
from maass_handler import MaassHandler
from models import CommandOutput, ErrorModel, SuiteReport, canonical_json
from runtime_provider import ThetaLabRuntimeProvider
from theta_handler import ThetaHandler

PROGRAM_NAME = "theta-lab"
PROGRAM_VERSION = "0.1.0"
PROGRAM_DESCRIPTION = "Theta and Maass-Shimura operators on q-expansions of Hermitian modular forms"

CommandFn = Callable[[CommandContext, argparse.Namespace], Any]


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors raised as ParameterError (exit 1) instead of exiting with 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ParameterError(f"{self.prog}: {message}")


class CommandRegistry:
    """Subcommand registry; handlers register on it the way tools register on a server."""

    def __init__(self, subparsers: Any):
        self._subparsers = subparsers
        self.commands: Dict[str, CommandFn] = {}

    def command(self, name: str, description: str,
                configure: Callable[[argparse.ArgumentParser], None]) -> Callable[[CommandFn], CommandFn]:
        def decorator(fn: CommandFn) -> CommandFn:
            parser = self._subparsers.add_parser(name, help=description, description=description)
            configure(parser)
            parser.set_defaults(command=name)
            self.commands[name] = fn
            return fn

        return decorator


def build_parser(settings: Dict[str, Any]) -> Tuple[ArgumentParser, CommandRegistry]:
    """Create the parser and register all handlers; returns (parser, registry)."""
    parser = ArgumentParser(prog=PROGRAM_NAME, description=PROGRAM_DESCRIPTION)
    parser.add_argument("--log-level", type=str,
                        help="log level for stderr (default: from env THETA_LAB_LOG_LEVEL or INFO)")
    parser.add_argument(
        "--enable-execution-log",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="Include ExecutionLog in command output (default: from env THETA_LAB_ENABLE_EXECUTION_LOG or false)",
    )
    parser.add_argument("--precision", type=int,
                        help="cap on p-adic precision (default: from env THETA_LAB_PRECISION or 64)")
    parser.add_argument("--seed", type=int, help="seed for check (default: from env THETA_LAB_CHECK_SEED)")
    parser.add_argument("--samples", type=int, help="random inputs per property in check")
    parser.add_argument("--fixtures-dir", type=str, help="directory of fixture JSON files")
    parser.add_argument("--version", "-v", action="version", version=f"%(prog)s {PROGRAM_VERSION}")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    registry = CommandRegistry(subparsers)

    ThetaHandler(registry, settings)
    MaassHandler(registry, settings)
    KSHandler(registry, settings)
    CheckHandler(registry, settings)
    return parser, registry


def _load_settings(args: argparse.Namespace) -> Configs:
    # 优先级：命令行参数 > 环境变量 > .env > 默认值
    return Configs({
        "log_level": args.log_level,
        "enable_execution_log": args.enable_execution_log,
        "precision": args.precision,
        "check_seed": args.seed,
        "check_samples": args.samples,
        "fixtures_dir": args.fixtures_dir,
    })


def _emit_error(code: str, message: str) -> None:
    sys.stderr.write(canonical_json(ErrorModel(error_code=code, error_message=message)))


def _report(result: Any, args: argparse.Namespace) -> int:
    if isinstance(result, SuiteReport):
        if args.json:
            sys.stdout.write(canonical_json(result))
        else:
            sys.stdout.write(format_report(result))
        if result.error:
            _emit_error(result.error.error_code, result.error.error_message)
            return EXIT_VALIDATION
        return EXIT_OK if result.failed == 0 else EXIT_VALIDATION

    if isinstance(result, CommandOutput):
        sys.stdout.write(canonical_json(result))
        if result.error:
            _emit_error(result.error.error_code, result.error.error_message)
        return result.exit_code

    raise TypeError(f"unexpected command result {type(result).__name__}")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run one subcommand and return its exit code."""
    load_dotenv()

    settings: Dict[str, Any] = {}
    logger.remove()
    logger.add(sys.stderr, level="WARNING")

    try:
        parser, registry = build_parser(settings)
        args = parser.parse_args(list(argv) if argv is not None else None)
        configs = _load_settings(args)
    except SystemExit as e:
        # --help / --version
        return int(e.code or 0)
    except ThetaLabError as e:
        _emit_error(e.error_code, str(e))
        return exit_code_for(e)
    except ValidationError as e:
        _emit_error("InvalidParameter", str(e))
        return EXIT_VALIDATION

    logger.remove()
    logger.add(sys.stderr, level=configs.log_level.upper())
    settings.update(configs.model_dump())

    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_VALIDATION

    logger.info(f"Running {PROGRAM_NAME} {args.command}")
    runtime_provider = ThetaLabRuntimeProvider()
    try:
        with runtime_provider.init_runtime(settings) as runtime_context:
            result = registry.commands[args.command](CommandContext(runtime_context), args)
        return _report(result, args)
    except ThetaLabError as e:
        logger.error(f"{args.command} failed: {e}")
        _emit_error(e.error_code, str(e))
        return exit_code_for(e)
    except KeyboardInterrupt:
        logger.info("Interrupted")
        return EXIT_VALIDATION
    except Exception as e:
        logger.exception(f"{args.command} raised an unexpected error")
        _emit_error("InternalError", f"{type(e).__name__}: {e}")
        return EXIT_VALIDATION


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
