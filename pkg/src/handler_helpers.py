"""命令处理器共用的纯逻辑：执行日志、输入文件加载、规范 JSON 输出、错误映射。"""

import json
import os
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, Optional, Tuple, Type, TypeVar

from loguru import logger
from pydantic import BaseModel, ValidationError

from errors import EXIT_VALIDATION, InvalidInputError, ThetaLabError, exit_code_for
from models import CommandOutput, ErrorModel, ExecutionLog, canonical_json

M = TypeVar("M", bound=BaseModel)

FIXTURE_PREFIX = "fixture:"


@dataclass
class CommandContext:
    """Per-invocation runtime context: {"config", "providers"} from the runtime provider."""

    runtime_context: Dict[str, Any] = field(default_factory=dict)

    @property
    def config(self) -> Dict[str, Any]:
        return self.runtime_context.get("config", {}) or {}

    def provider(self, name: str) -> Any:
        providers = self.runtime_context.get("providers", {}) or {}
        value = providers.get(name)
        if value is None:
            raise RuntimeError(f"{name} not available in runtime providers")
        return value


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")


def start_execution_log(command: str, key: str) -> Tuple[ExecutionLog, int]:
    start_ms = int(time.time() * 1000)
    log = ExecutionLog(tool_call_id=f"{command}_{key}_{start_ms}", start_time=utc_now())
    return log, start_ms


def finish_execution_log(log: ExecutionLog, start_ms: int) -> ExecutionLog:
    log.end_time = utc_now()
    log.duration_ms = int(time.time() * 1000) - start_ms
    return log


def load_json(ctx: CommandContext, path: str) -> Any:
    """Read a JSON document from a file, or from a bundled fixture named ``fixture:<name>``."""
    if path.startswith(FIXTURE_PREFIX):
        name = path[len(FIXTURE_PREFIX):]
        fixtures = ctx.provider("fixtures")
        if name not in fixtures:
            raise InvalidInputError(f"unknown fixture {name!r}; available: {sorted(fixtures)}")
        return fixtures[name]
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise InvalidInputError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"{path} is not valid JSON: {e}")


def parse_model(data: Any, model: Type[M], source: str) -> M:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise InvalidInputError(f"{source} is not a valid {model.__name__}: {e}")


def load_model(ctx: CommandContext, path: str, model: Type[M]) -> M:
    return parse_model(load_json(ctx, path), model, path)


def write_model(path: Optional[str], model: BaseModel) -> str:
    """Write canonical JSON to ``path`` (or return it when path is None)."""
    text = canonical_json(model)
    if path:
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        logger.debug(f"wrote {len(text)} bytes to {path}")
    return text


def failure_output(command: str, exc: BaseException, log: ExecutionLog, start_ms: int) -> CommandOutput:
    code = exc.error_code if isinstance(exc, ThetaLabError) else "InternalError"
    log.error = str(exc)
    log.metadata = {"error_type": type(exc).__name__}
    finish_execution_log(log, start_ms)
    exit_code = exit_code_for(exc) if isinstance(exc, ThetaLabError) else EXIT_VALIDATION
    return CommandOutput(command=command, exit_code=exit_code,
                         error=ErrorModel(error_code=code, error_message=str(exc)), execution_log=log)
