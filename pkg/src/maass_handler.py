import argparse
import os
from typing import Any, Dict, Optional

from loguru import logger

from errors import ParameterError, ShapeError, ThetaLabError
from handler_helpers import (
    CommandContext,
    failure_output,
    finish_execution_log,
    load_json,
    parse_model,
    start_execution_log,
    write_model,
)
from maass import NearlyHoloForm, delta_iterate, holomorphic_part
from models import CommandOutput, NearlyHoloFormFile, QExpansionFile, enable_execution_log_ctx
from qexp import QExpansion


def _configure_maass(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="nearly holomorphic form JSON, or an n=1 q-expansion JSON together with --k")
    parser.add_argument("-o", "--output", required=True, help="output JSON file")
    parser.add_argument("--k", type=int, help="weight; required for q-expansion input, checked for form input")
    parser.add_argument("--iterate", type=int, default=1, help="number of delta applications (default: 1)")


def _configure_holpart(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="nearly holomorphic form JSON")
    parser.add_argument("-o", "--output", required=True, help="output q-expansion JSON file")


class MaassHandler:
    """Handler for the n = 1 Maass-Shimura operator and the holomorphic projection."""

    def __init__(self, registry: Any, settings: Optional[Dict[str, Any]] = None):
        self.settings = settings if settings is not None else {}
        if registry is None:
            return
        self.registry = registry
        self.registry.command(
            name="maass",
            description="Apply delta_k, delta_(k+2), ... ITERATE times to a nearly holomorphic form",
            configure=_configure_maass,
        )(self.maass)
        self.registry.command(
            name="holpart",
            description="Holomorphic part (the Y^0 slice) of a nearly holomorphic form",
            configure=_configure_holpart,
        )(self.holpart)
        logger.info("Maass Handler initialized")

    def load_form(self, ctx: CommandContext, path: str, k: Optional[int]) -> NearlyHoloForm:
        """读取近全纯形式；输入为 n=1 的 q-展开时需要显式给出权重 k。"""
        data = load_json(ctx, path)
        if isinstance(data, dict) and "terms" in data:
            form = NearlyHoloForm.from_file_model(parse_model(data, NearlyHoloFormFile, path))
            if k is not None and k != form.k:
                raise ParameterError(f"--k {k} disagrees with the weight {form.k} stored in {path}")
            return form
        f = QExpansion.from_file_model(parse_model(data, QExpansionFile, path))
        if f.n != 1:
            raise ShapeError(f"maass works on n=1 q-expansions, {path} has n={f.n}")
        if k is None:
            raise ParameterError("--k is required when the input is a q-expansion")
        return NearlyHoloForm.from_qexpansion(f, k)

    def maass(self, ctx: CommandContext, args: argparse.Namespace) -> CommandOutput:
        enable_execution_log_ctx.set(self.settings.get("enable_execution_log", False))
        log, start_ms = start_execution_log("maass", os.path.basename(args.input))
        try:
            form = self.load_form(ctx, args.input, args.k)
            log.messages.append(f"loaded {form}")
            result = delta_iterate(form, args.iterate)
            write_model(args.output, result.to_file_model())
            finish_execution_log(log, start_ms)
            return CommandOutput(
                command="maass",
                output_path=args.output,
                summary={"k": result.k, "d": result.d, "trace_bound": result.trace_bound,
                         "y_degree": result.y_degree, "terms": len(result.coeffs)},
                execution_log=log,
            )
        except ThetaLabError as e:
            logger.error(f"maass failed: {e}")
            return failure_output("maass", e, log, start_ms)

    def holpart(self, ctx: CommandContext, args: argparse.Namespace) -> CommandOutput:
        enable_execution_log_ctx.set(self.settings.get("enable_execution_log", False))
        log, start_ms = start_execution_log("holpart", os.path.basename(args.input))
        try:
            form = NearlyHoloForm.from_file_model(parse_model(load_json(ctx, args.input), NearlyHoloFormFile,
                                                              args.input))
            result = holomorphic_part(form)
            if not form.is_y_free():
                log.messages.append(f"dropped Y-terms up to Y^{form.y_degree}")
            write_model(args.output, result.to_file_model())
            finish_execution_log(log, start_ms)
            return CommandOutput(
                command="holpart",
                output_path=args.output,
                summary={"n": 1, "d": result.d, "trace_bound": result.trace_bound, "terms": len(result.coefficients)},
                execution_log=log,
            )
        except ThetaLabError as e:
            logger.error(f"holpart failed: {e}")
            return failure_output("holpart", e, log, start_ms)
