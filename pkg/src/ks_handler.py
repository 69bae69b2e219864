import argparse
import os
from typing import Any, Dict, Optional

from loguru import logger

from errors import InvariantViolation, ParameterError, ShapeError, ThetaLabError
from gmks import PointOfHn, format_label, ispan_elements, ks_kernel_check, ks_table
from handler_helpers import (
    CommandContext,
    failure_output,
    finish_execution_log,
    load_model,
    start_execution_log,
    write_model,
)
from models import CommandOutput, KSTableFile, MatrixFile, enable_execution_log_ctx


def _configure_ks_table(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True, help="size of the point, 1 <= n")
    parser.add_argument("--d", type=int, required=True, help="field parameter of K = Q(sqrt(-d))")
    parser.add_argument("--point", required=True, help="JSON matrix file with a point of H_n")
    parser.add_argument("-o", "--output", required=True, help="output JSON file")


class KSHandler:
    """Handler for the Kodaira-Spencer table at a point."""

    def __init__(self, registry: Any, settings: Optional[Dict[str, Any]] = None):
        self.settings = settings if settings is not None else {}
        if registry is None:
            return
        self.registry = registry
        self.registry.command(
            name="ks-table",
            description="Tabulate KS(du_i (x) dw_j) at a point of H_n and check the kernel",
            configure=_configure_ks_table,
        )(self.ks_table)
        logger.info("KS Handler initialized")

    def build_table(self, point: PointOfHn) -> KSTableFile:
        n = point.n
        table = ks_table(point)
        kernel_ok = ks_kernel_check(n, point)
        non_vacuous = table[0][n]
        if non_vacuous is None:
            raise InvariantViolation("KS(du_1 (x) dw_(n+1)) vanishes; the table is degenerate")
        return KSTableFile(
            n=n,
            d=point.d,
            point=point.to_pairs(),
            table=[[format_label(label) if label else None for label in row] for row in table],
            kernel_ok=kernel_ok,
            kernel_elements=len(ispan_elements(n, point.d)),
            non_vacuous=format_label(non_vacuous),
        )

    def ks_table(self, ctx: CommandContext, args: argparse.Namespace) -> CommandOutput:
        enable_execution_log_ctx.set(self.settings.get("enable_execution_log", False))
        log, start_ms = start_execution_log("ks-table", os.path.basename(args.point))
        try:
            point_file = load_model(ctx, args.point, MatrixFile)
            if point_file.d != args.d:
                raise ParameterError(f"--d {args.d} disagrees with d={point_file.d} in {args.point}")
            point = PointOfHn.from_pairs(point_file.matrix, point_file.d)
            if point.n != args.n:
                raise ShapeError(f"--n {args.n} disagrees with the {point.n}x{point.n} point in {args.point}")
            result = self.build_table(point)
            write_model(args.output, result)
            if not result.kernel_ok:
                raise InvariantViolation(
                    f"KS kernel check failed at the point in {args.point}; table written to {args.output}")
            finish_execution_log(log, start_ms)
            return CommandOutput(
                command="ks-table",
                output_path=args.output,
                summary={"n": result.n, "d": result.d, "kernel_ok": result.kernel_ok,
                         "kernel_elements": result.kernel_elements, "non_vacuous": result.non_vacuous},
                execution_log=log,
            )
        except ThetaLabError as e:
            logger.error(f"ks-table failed: {e}")
            return failure_output("ks-table", e, log, start_ms)
