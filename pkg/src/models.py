import contextvars
import json
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Optional

from loguru import logger
from pydantic import AfterValidator, BaseModel, Field, conlist, model_serializer

# Context variable to control execution_log output per command
enable_execution_log_ctx = contextvars.ContextVar('enable_execution_log', default=False)


class ExecutionLog(BaseModel):
    """
    ExecutionLog records the execution of one command: timing, steps, warnings and the error if any.
    """
    tool_call_id: Optional[str] = Field(None, description="Unique identifier for this command execution")
    start_time: Optional[str] = Field(None, description="Execution start time in ISO 8601 format")
    end_time: Optional[str] = Field(None, description="Execution end time in ISO 8601 format")
    duration_ms: Optional[int] = Field(None, description="Total execution duration in milliseconds")
    messages: List[str] = Field(default_factory=list, description="Step-by-step execution log messages")
    warnings: List[str] = Field(default_factory=list, description="Non-fatal warnings encountered during execution")
    error: Optional[str] = Field(None, description="Error message if execution failed")
    metadata: Dict[str, Any] = Field(default_factory=dict, description="Additional command-specific metadata")

    def log_to_logger(self):
        """Log ExecutionLog details to logger"""
        log_data = {
            "tool_call_id": self.tool_call_id,
            "start_time": self.start_time,
            "end_time": self.end_time,
            "duration_ms": self.duration_ms,
            "messages": self.messages,
            "warnings": self.warnings,
            "error": self.error,
            "metadata": self.metadata
        }

        if self.error:
            logger.error(f"ExecutionLog [ERROR]: {log_data}")
        elif self.warnings:
            logger.warning(f"ExecutionLog [WARNING]: {log_data}")
        else:
            logger.info(f"ExecutionLog [SUCCESS]: {log_data}")


class BaseOutputModel(BaseModel):
    """
    Base class for command results; execution_log is emitted only when enabled.
    """
    execution_log: ExecutionLog = Field(default_factory=ExecutionLog, description="Execution process log")

    @model_serializer(mode='wrap', when_used='always')
    def _serialize_model(self, serializer, info):
        if hasattr(self, 'execution_log') and self.execution_log:
            self.execution_log.log_to_logger()

        data = serializer(self)

        enable_execution_log = enable_execution_log_ctx.get()
        if not enable_execution_log and isinstance(data, dict) and 'execution_log' in data:
            del data['execution_log']

        return data


class ErrorModel(BaseModel):
    error_code: str = Field(...)
    error_message: str = Field(...)


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def _check_rational(text: str) -> str:
    try:
        Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a rational number: {text!r}") from e
    return text


RationalText = Annotated[str, AfterValidator(_check_rational)]
FieldPair = conlist(RationalText, min_length=2, max_length=2)


class TensorTermModel(BaseModel):
    wm: List[int] = Field(default_factory=list, description="minus-side word")
    wp: List[int] = Field(default_factory=list, description="plus-side word")
    c: FieldPair = Field(..., description="coefficient [x, y] meaning x + y*w")


class CoefficientEntryModel(BaseModel):
    h: List[List[FieldPair]] = Field(..., description="Hermitian exponent, row-major")
    c: List[TensorTermModel] = Field(default_factory=list)


class QExpansionFile(BaseModel):
    n: int = Field(..., ge=1)
    d: int = Field(..., ge=1)
    trace_bound: int = Field(..., ge=0)
    degree: conlist(int, min_length=2, max_length=2) = Field(default_factory=lambda: [0, 0])
    commutative: Optional[bool] = Field(None, description="present and true for data in the commutative quotient")
    coefficients: List[CoefficientEntryModel] = Field(default_factory=list)


class NearlyHoloTermModel(BaseModel):
    y: int = Field(..., ge=0, description="power of Y")
    m: int = Field(..., ge=0, description="q-exponent")
    c: FieldPair


class NearlyHoloFormFile(BaseModel):
    k: int
    d: int = Field(1, ge=1)
    trace_bound: int = Field(..., ge=0)
    terms: List[NearlyHoloTermModel] = Field(default_factory=list)


class MatrixFile(BaseModel):
    d: int = Field(..., ge=1)
    matrix: List[List[FieldPair]]


class ProjectorEntryModel(BaseModel):
    row: int = Field(..., ge=0)
    col: int = Field(..., ge=0)
    c: FieldPair


class ProjectorFile(BaseModel):
    """Sparse matrix on the basis of (minus block, plus block) words of length e, row-major order."""
    n: int = Field(..., ge=1)
    d: int = Field(..., ge=1)
    e: int = Field(..., ge=1)
    entries: List[ProjectorEntryModel] = Field(default_factory=list)


class KSTableFile(BaseModel):
    n: int
    d: int
    point: List[List[FieldPair]]
    table: List[List[Optional[str]]] = Field(..., description="KS(du_i (x) dw_j) as a dz label or null for zero")
    kernel_ok: bool
    kernel_elements: int
    non_vacuous: Optional[str] = Field(None, description="label of KS(du_1 (x) dw_(n+1))")


# ---------------------------------------------------------------------------
# command results
# ---------------------------------------------------------------------------


class CheckResult(BaseModel):
    suite: str
    name: str
    passed: bool
    detail: Optional[str] = None
    duration_ms: Optional[int] = None


class SuiteReport(BaseOutputModel):
    suites: List[str] = Field(default_factory=list)
    results: List[CheckResult] = Field(default_factory=list)
    passed: int = 0
    failed: int = 0
    error: Optional[ErrorModel] = None


class CommandOutput(BaseOutputModel):
    command: str
    exit_code: int = 0
    output_path: Optional[str] = None
    summary: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[ErrorModel] = None


def canonical_json(model: BaseModel) -> str:
    """Sorted keys, two-space indent, trailing newline; None fields omitted."""
    data = model.model_dump(mode="json", exclude_none=True)
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
