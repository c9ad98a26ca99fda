from __future__ import annotations

import itertools

import pytest

from rolescore.results import (
    Layer,
    ParseStatus,
    RunRecord,
    Severity,
    TaskResult,
    TaskType,
    Verdict,
)

_counter = itertools.count()


def make_task(
    task_type: TaskType = TaskType.TRUE_POSITIVE,
    detected: bool | None = None,
    task_id: str | None = None,
    category: str = "Injection",
    language: str = "python",
    severity: Severity | str | None = None,
    cwe_match: int | None = None,
    location_match: int | None = None,
    location_iou: float | None = None,
    reasoning: bool = True,
    evidence: bool = False,
    parse_status: ParseStatus = ParseStatus.FULL,
    errored: bool = False,
    cost_usd: float | None = 0.01,
    total_tokens: int = 1000,
    wall_time_s: float = 5.0,
    tool_calls: int | None = None,
    tool_calls_relevant: int | None = None,
    turns: int | None = None,
) -> TaskResult:
    """A valid task with overridable outcome fields.

    ``detected=None`` leaves the verdict absent (silent model).
    """
    if detected is None:
        verdict = None
    else:
        verdict = Verdict.VULNERABLE if detected else Verdict.NOT_VULNERABLE
    if parse_status is ParseStatus.FAILED:
        verdict = None
    if isinstance(severity, str):
        severity = Severity(severity)
    return TaskResult(
        task_id=task_id or f"t{next(_counter):04d}",
        task_type=task_type,
        task_category=category,
        task_language=language,
        task_severity=severity,
        predicted_verdict=verdict,
        cwe_match=cwe_match,
        location_match=location_match,
        location_iou=location_iou,
        reasoning_present=reasoning,
        evidence_source=evidence,
        evidence_sink=evidence,
        evidence_flow=evidence,
        parse_status=parse_status,
        errored=errored,
        cost_usd=cost_usd,
        total_tokens=total_tokens,
        wall_time_s=wall_time_s,
        tool_calls=tool_calls,
        tool_calls_relevant=tool_calls_relevant,
        turns=turns,
    )


def make_run(
    tasks,
    run_id: str = "run-1",
    model_name: str = "model-x",
    layer: Layer = Layer.TU,
) -> RunRecord:
    return RunRecord(run_id=run_id, model_name=model_name, layer=layer, tasks=tuple(tasks))


def tp_pp_pair() -> list[TaskResult]:
    """Minimal balanced pair: one detected TP, one cleared post-patch."""
    return [
        make_task(TaskType.TRUE_POSITIVE, detected=True),
        make_task(TaskType.POST_PATCH, detected=False),
    ]


@pytest.fixture
def balanced_run() -> RunRecord:
    return make_run(tp_pp_pair())
