"""Per-task result records, run files, and the confusion-matrix view.

A run file is UTF-8 line-delimited JSON: a ``#meta`` header line with the
run identity, then one task object per line. Everything downstream
(dimensions, scoring, cohort analytics) consumes the validated RunRecord
built here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from enum import Enum
from typing import Any, Iterable

from .errors import ValidationFailure

META_PREFIX = "#meta"


class TaskType(str, Enum):
    TRUE_POSITIVE = "true_positive"
    POST_PATCH = "post_patch"
    SAST_FP = "sast_fp"


class Severity(str, Enum):
    CRITICAL = "critical"
    HIGH = "high"
    MEDIUM = "medium"
    LOW = "low"


class Verdict(str, Enum):
    VULNERABLE = "vulnerable"
    NOT_VULNERABLE = "not_vulnerable"


class ParseStatus(str, Enum):
    FULL = "FULL"
    PARTIAL = "PARTIAL"
    FAILED = "FAILED"


class Layer(str, Enum):
    CIP = "CIP"
    TU = "TU"


class MalformedLine(ValidationFailure):
    def __init__(self, line_no: int, detail: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {detail}")


class SchemaViolation(ValidationFailure):
    def __init__(self, field: str, detail: str, line_no: int | None = None):
        self.field = field
        self.line_no = line_no
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(f"{where}field '{field}': {detail}")


class DuplicateTaskId(ValidationFailure):
    def __init__(self, task_id: str):
        self.task_id = task_id
        super().__init__(f"duplicate task_id '{task_id}'")


class EmptyRun(ValidationFailure):
    def __init__(self) -> None:
        super().__init__("run contains no tasks")


class InvalidRange(ValidationFailure):
    pass


@dataclass(frozen=True)
class TaskResult:
    """One task outcome as emitted by an upstream benchmark run."""

    task_id: str
    task_type: TaskType
    task_category: str
    task_language: str
    reasoning_present: bool
    evidence_source: bool
    evidence_sink: bool
    evidence_flow: bool
    parse_status: ParseStatus
    errored: bool
    total_tokens: int
    wall_time_s: float
    task_severity: Severity | None = None
    predicted_verdict: Verdict | None = None
    cwe_match: int | None = None
    location_match: int | None = None
    location_iou: float | None = None
    predicted_line_range: tuple[int, int] | None = None
    truth_line_range: tuple[int, int] | None = None
    cost_usd: float | None = None
    tool_calls: int | None = None
    tool_calls_relevant: int | None = None
    turns: int | None = None

    def __post_init__(self) -> None:
        if self.task_severity is not None and self.task_type is not TaskType.TRUE_POSITIVE:
            raise SchemaViolation("task_severity", "only true_positive tasks carry severity")
        if self.tool_calls_relevant is not None:
            if self.tool_calls is None:
                raise SchemaViolation("tool_calls_relevant", "present without tool_calls")
            if self.tool_calls_relevant > self.tool_calls:
                raise SchemaViolation("tool_calls_relevant", "exceeds tool_calls")
        if self.location_iou is not None and not 0.0 <= self.location_iou <= 1.0:
            raise SchemaViolation("location_iou", f"{self.location_iou} outside [0, 1]")
        if self.parse_status is ParseStatus.FAILED and self.predicted_verdict is not None:
            raise SchemaViolation("predicted_verdict", "present despite FAILED parse")
        for name in ("predicted_line_range", "truth_line_range"):
            rng = getattr(self, name)
            if rng is not None:
                start, end = rng
                if start < 1 or start > end:
                    raise SchemaViolation(name, f"invalid range {rng}")
        for name in ("cwe_match", "location_match"):
            flag = getattr(self, name)
            if flag is not None and flag not in (0, 1):
                raise SchemaViolation(name, f"{flag} not in {{0, 1}}")
        if self.cost_usd is not None and self.cost_usd < 0:
            raise SchemaViolation("cost_usd", "negative")
        if self.total_tokens < 0:
            raise SchemaViolation("total_tokens", "negative")
        if self.wall_time_s < 0:
            raise SchemaViolation("wall_time_s", "negative")
        for name in ("tool_calls", "tool_calls_relevant", "turns"):
            count = getattr(self, name)
            if count is not None and count < 0:
                raise SchemaViolation(name, "negative")

    @property
    def detected(self) -> bool:
        return self.predicted_verdict is Verdict.VULNERABLE


# JSON field typing used by the line parser: (required, converter).
_ENUM_FIELDS = {
    "task_type": TaskType,
    "task_severity": Severity,
    "predicted_verdict": Verdict,
    "parse_status": ParseStatus,
}
_BOOL_FIELDS = {
    "reasoning_present", "evidence_source", "evidence_sink", "evidence_flow", "errored",
}
_REQUIRED_FIELDS = {
    "task_id", "task_type", "task_category", "task_language", "reasoning_present",
    "evidence_source", "evidence_sink", "evidence_flow", "parse_status", "errored",
    "total_tokens", "wall_time_s",
}
_ALL_FIELDS = {f.name for f in fields(TaskResult)}


def task_from_dict(obj: dict[str, Any], line_no: int | None = None) -> TaskResult:
    """Build a validated TaskResult from a decoded JSON object."""
    unknown = set(obj) - _ALL_FIELDS
    if unknown:
        raise SchemaViolation(sorted(unknown)[0], "unknown field", line_no)
    missing = _REQUIRED_FIELDS - set(obj)
    if missing:
        raise SchemaViolation(sorted(missing)[0], "required field missing", line_no)

    kwargs: dict[str, Any] = {}
    for name, value in obj.items():
        if value is None:
            if name in _REQUIRED_FIELDS:
                raise SchemaViolation(name, "required field is null", line_no)
            continue
        if name in _ENUM_FIELDS:
            try:
                value = _ENUM_FIELDS[name](value)
            except ValueError:
                raise SchemaViolation(name, f"invalid value {value!r}", line_no) from None
        elif name in _BOOL_FIELDS:
            if not isinstance(value, bool):
                raise SchemaViolation(name, "expected a boolean", line_no)
        elif name in ("predicted_line_range", "truth_line_range"):
            if (not isinstance(value, (list, tuple)) or len(value) != 2
                    or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)):
                raise SchemaViolation(name, "expected [start, end] integers", line_no)
            value = (value[0], value[1])
        elif name in ("cwe_match", "location_match", "total_tokens", "tool_calls",
                      "tool_calls_relevant", "turns"):
            if not isinstance(value, int) or isinstance(value, bool):
                raise SchemaViolation(name, "expected an integer", line_no)
        elif name in ("location_iou", "cost_usd", "wall_time_s"):
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise SchemaViolation(name, "expected a number", line_no)
            value = float(value)
        elif not isinstance(value, str):
            raise SchemaViolation(name, "expected a string", line_no)
        kwargs[name] = value
    try:
        return TaskResult(**kwargs)
    except SchemaViolation as exc:
        raise SchemaViolation(exc.field, str(exc), line_no) from None


def task_to_dict(task: TaskResult) -> dict[str, Any]:
    """Serialize one task, dropping absent optionals, in declaration order."""
    out: dict[str, Any] = {}
    for f in fields(TaskResult):
        value = getattr(task, f.name)
        if value is None:
            continue
        if isinstance(value, Enum):
            value = value.value
        elif isinstance(value, tuple):
            value = list(value)
        out[f.name] = value
    return out


@dataclass(frozen=True)
class RunRecord:
    """A validated (model, layer) evaluation run.

    Immutable after construction; availability flags are derived from the
    task contents and never hand-set.
    """

    run_id: str
    model_name: str
    layer: Layer
    tasks: tuple[TaskResult, ...]

    def __post_init__(self) -> None:
        if not self.tasks:
            raise EmptyRun()
        seen: set[str] = set()
        for task in self.tasks:
            if task.task_id in seen:
                raise DuplicateTaskId(task.task_id)
            seen.add(task.task_id)
            if self.layer is Layer.CIP and task.tool_calls is not None:
                raise SchemaViolation(
                    "tool_calls", f"present on task '{task.task_id}' in a CIP run")

    @property
    def cost_tracked(self) -> bool:
        return all(t.cost_usd is not None for t in self.tasks)

    @property
    def severity_present(self) -> bool:
        return any(
            t.task_severity is not None
            for t in self.tasks if t.task_type is TaskType.TRUE_POSITIVE
        )

    @property
    def has_sast_fp(self) -> bool:
        return any(t.task_type is TaskType.SAST_FP for t in self.tasks)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.fp + self.tn


def confusion(run: RunRecord) -> ConfusionMatrix:
    """Verdict confusion over true_positive and post_patch tasks.

    Positive class is "vulnerable". A missing or unparseable verdict counts
    as not flagged, so silent models land in fn/tn rather than vanishing.
    sast_fp tasks are excluded.
    """
    tp = fp = fn = tn = 0
    for task in run.tasks:
        if task.task_type is TaskType.TRUE_POSITIVE:
            if task.detected:
                tp += 1
            else:
                fn += 1
        elif task.task_type is TaskType.POST_PATCH:
            if task.detected:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fp=fp, fn=fn, tn=tn)


def interval_iou(predicted: tuple[int, int], truth: tuple[int, int]) -> float:
    """Intersection-over-union of two inclusive line ranges."""
    for rng in (predicted, truth):
        start, end = rng
        if start < 1 or start > end:
            raise InvalidRange(f"invalid line range {rng}")
    inter = min(predicted[1], truth[1]) - max(predicted[0], truth[0]) + 1
    if inter <= 0:
        return 0.0
    union = (predicted[1] - predicted[0] + 1) + (truth[1] - truth[0] + 1) - inter
    return inter / union


def parse_results(source: str | Iterable[str]) -> RunRecord:
    """Parse a line-delimited run file into a validated RunRecord.

    The first nonempty line must be the ``#meta`` header carrying run_id,
    model_name, and layer. Errors report the first offending line.
    """
    if isinstance(source, str):
        lines: Iterable[str] = source.splitlines()
    else:
        lines = source

    meta: dict[str, Any] | None = None
    tasks: list[TaskResult] = []
    for line_no, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        if meta is None:
            if not line.startswith(META_PREFIX):
                raise MalformedLine(line_no, f"expected '{META_PREFIX}' header first")
            try:
                meta = json.loads(line[len(META_PREFIX):])
            except json.JSONDecodeError as exc:
                raise MalformedLine(line_no, f"bad meta JSON: {exc.msg}") from None
            for key in ("run_id", "model_name", "layer"):
                if not isinstance(meta.get(key), str):
                    raise SchemaViolation(key, "missing from meta header", line_no)
            try:
                meta["layer"] = Layer(meta["layer"])
            except ValueError:
                raise SchemaViolation("layer", f"invalid value {meta['layer']!r}", line_no) from None
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedLine(line_no, exc.msg) from None
        if not isinstance(obj, dict):
            raise MalformedLine(line_no, "task line is not a JSON object")
        tasks.append(task_from_dict(obj, line_no))

    if meta is None:
        raise EmptyRun()
    return RunRecord(
        run_id=meta["run_id"],
        model_name=meta["model_name"],
        layer=meta["layer"],
        tasks=tuple(tasks),
    )


def serialize_run(run: RunRecord) -> str:
    """Render a RunRecord back to its line-delimited file form."""
    header = {"run_id": run.run_id, "model_name": run.model_name, "layer": run.layer.value}
    out = [f"{META_PREFIX} {json.dumps(header, separators=(', ', ': '))}"]
    out.extend(json.dumps(task_to_dict(t), separators=(",", ":")) for t in run.tasks)
    return "\n".join(out) + "\n"


def load_results(path: str) -> RunRecord:
    with open(path, encoding="utf-8") as fh:
        return parse_results(fh)
