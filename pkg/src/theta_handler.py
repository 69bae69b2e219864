import argparse
import os
from typing import Any, Dict, Optional

from loguru import logger
from sympy import isprime

import kmatrix
from cmfield import FieldElement
from errors import ParameterError, ShapeError, ThetaLabError
from handler_helpers import (
    CommandContext,
    failure_output,
    finish_execution_log,
    load_model,
    start_execution_log,
    write_model,
)
from models import CommandOutput, MatrixFile, ProjectorFile, QExpansionFile, enable_execution_log_ctx
from qexp import QExpansion, derivation_D, frobenius, padic_integral
from theta import Projector, ProjectorKind, theta_power, theta_Z


def summarize(f: QExpansion) -> Dict[str, Any]:
    return {"n": f.n, "d": f.d, "trace_bound": f.trace_bound, "degree": list(f.degree),
            "terms": len(f.coefficients)}


def _add_input_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="q-expansion JSON file, or fixture:<name> for a bundled fixture")
    parser.add_argument("-o", "--output", required=True, help="output JSON file")


def _configure_theta(parser: argparse.ArgumentParser) -> None:
    _add_input_output(parser)
    parser.add_argument("--power", type=int, default=1, help="number of theta applications (default: 1)")
    parser.add_argument("--project", choices=[k.value for k in ProjectorKind], default="none",
                        help="projector applied to the last POWER letters of each word (default: none)")
    parser.add_argument("--projector", help="projector matrix JSON file, required with --project user")


def _configure_frobenius(parser: argparse.ArgumentParser) -> None:
    _add_input_output(parser)
    parser.add_argument("--p", type=int, required=True, help="prime p for f(q) -> f(q^p)")
    parser.add_argument("--bound", type=int, help="output trace bound (default: p times the input bound)")


def _configure_derive(parser: argparse.ArgumentParser) -> None:
    _add_input_output(parser)
    parser.add_argument("--gamma", required=True, help="JSON matrix file with entries in Z[w]")


def _configure_integral(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="q-expansion JSON file, or fixture:<name> for a bundled fixture")
    parser.add_argument("--p", type=int, required=True, help="odd prime split in K")


class ThetaHandler:
    """Handler for theta, frobenius, derive and integral."""

    def __init__(self, registry: Any, settings: Optional[Dict[str, Any]] = None):
        self.settings = settings if settings is not None else {}
        if registry is None:
            return
        self.registry = registry
        self.registry.command(
            name="theta",
            description="Apply the theta operator POWER times, optionally followed by a projector",
            configure=_configure_theta,
        )(self.theta)
        self.registry.command(
            name="frobenius",
            description="Apply Frobenius f(q) -> f(q^p)",
            configure=_configure_frobenius,
        )(self.frobenius)
        self.registry.command(
            name="derive",
            description="Apply the derivation D(gamma): c(h) -> tr(h gamma) c(h)",
            configure=_configure_derive,
        )(self.derive)
        self.registry.command(
            name="integral",
            description="Check p-integrality of all coefficients at both primes above a split p",
            configure=_configure_integral,
        )(self.integral)
        logger.info("Theta Handler initialized")

    def _load(self, ctx: CommandContext, path: str) -> QExpansion:
        return QExpansion.from_file_model(load_model(ctx, path, QExpansionFile))

    def build_projector(self, ctx: CommandContext, kind: str, e: int, n: int, path: Optional[str]) -> Projector:
        kind_enum = ProjectorKind(kind)
        if kind_enum == ProjectorKind.USER:
            if not path:
                raise ParameterError("--project user needs --projector FILE")
            model = load_model(ctx, path, ProjectorFile)
            if model.n != n:
                raise ShapeError(f"projector built for n={model.n}, series has n={n}")
            if model.e != e:
                raise ShapeError(f"projector acts on {model.e} slots, theta power is {e}")
            entries: Dict = {}
            for entry in model.entries:
                if (entry.row, entry.col) in entries:
                    raise ParameterError(f"projector entry ({entry.row},{entry.col}) listed twice")
                entries[(entry.row, entry.col)] = FieldElement.from_pair(entry.c, model.d)
            return Projector.from_matrix(n, e, entries)
        if path:
            raise ParameterError("--projector is only used with --project user")
        return {
            ProjectorKind.IDENTITY: Projector.identity,
            ProjectorKind.SYMMETRIZE: Projector.symmetrize,
            ProjectorKind.DET: Projector.det,
        }[kind_enum](e)

    def theta(self, ctx: CommandContext, args: argparse.Namespace) -> CommandOutput:
        """theta^E f, or Z(theta^E f) for a projector Z."""
        enable_execution_log_ctx.set(self.settings.get("enable_execution_log", False))
        log, start_ms = start_execution_log("theta", os.path.basename(args.input))
        try:
            f = self._load(ctx, args.input)
            log.messages.append(f"loaded {f}")
            if args.project == ProjectorKind.IDENTITY.value and not args.projector:
                result = theta_power(f, args.power)
            else:
                projector = self.build_projector(ctx, args.project, args.power, f.n, args.projector)
                log.messages.append(f"projector {projector.kind.value} on {projector.e} slots")
                result = theta_Z(f, args.power, projector)
            write_model(args.output, result.to_file_model())
            log.messages.append(f"wrote {args.output}")
            finish_execution_log(log, start_ms)
            return CommandOutput(command="theta", output_path=args.output, summary=summarize(result),
                                 execution_log=log)
        except ThetaLabError as e:
            logger.error(f"theta failed: {e}")
            return failure_output("theta", e, log, start_ms)

    def frobenius(self, ctx: CommandContext, args: argparse.Namespace) -> CommandOutput:
        enable_execution_log_ctx.set(self.settings.get("enable_execution_log", False))
        log, start_ms = start_execution_log("frobenius", os.path.basename(args.input))
        try:
            f = self._load(ctx, args.input)
            if not isprime(args.p):
                raise ParameterError(f"--p must be prime, got {args.p}")
            result = frobenius(f, args.p, args.bound)
            dropped = len(f.coefficients) - len(result.coefficients)
            if dropped:
                log.warnings.append(f"{dropped} coefficients fell above the output bound {result.trace_bound}")
            write_model(args.output, result.to_file_model())
            finish_execution_log(log, start_ms)
            return CommandOutput(command="frobenius", output_path=args.output, summary=summarize(result),
                                 execution_log=log)
        except ThetaLabError as e:
            logger.error(f"frobenius failed: {e}")
            return failure_output("frobenius", e, log, start_ms)

    def derive(self, ctx: CommandContext, args: argparse.Namespace) -> CommandOutput:
        enable_execution_log_ctx.set(self.settings.get("enable_execution_log", False))
        log, start_ms = start_execution_log("derive", os.path.basename(args.input))
        try:
            f = self._load(ctx, args.input)
            gamma_file = load_model(ctx, args.gamma, MatrixFile)
            if gamma_file.d != f.d:
                raise ParameterError(f"gamma over d={gamma_file.d}, series over d={f.d}")
            gamma = kmatrix.from_pairs(gamma_file.matrix, gamma_file.d)
            result = derivation_D(gamma, f)
            write_model(args.output, result.to_file_model())
            finish_execution_log(log, start_ms)
            return CommandOutput(command="derive", output_path=args.output, summary=summarize(result),
                                 execution_log=log)
        except ThetaLabError as e:
            logger.error(f"derive failed: {e}")
            return failure_output("derive", e, log, start_ms)

    def integral(self, ctx: CommandContext, args: argparse.Namespace) -> CommandOutput:
        """v-integrality at v and vbar; p-adic precision is capped by THETA_LAB_PRECISION."""
        enable_execution_log_ctx.set(self.settings.get("enable_execution_log", False))
        log, start_ms = start_execution_log("integral", os.path.basename(args.input))
        try:
            f = self._load(ctx, args.input)
            v = ctx.provider("split_prime_factory")(args.p, f.d)
            verdict = {"v": padic_integral(f, v), "vbar": padic_integral(f, v.conjugate())}
            log.messages.append(f"p={args.p} root r={v.roots[0]} cap={v.cap}")
            finish_execution_log(log, start_ms)
            summary = summarize(f)
            summary.update({"p": args.p, "integral": verdict})
            return CommandOutput(command="integral", summary=summary, execution_log=log)
        except ThetaLabError as e:
            logger.error(f"integral failed: {e}")
            return failure_output("integral", e, log, start_ms)
