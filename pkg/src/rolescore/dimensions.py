"""The 35-dimension catalog and the engine that evaluates them for a run.

Each dimension yields either an available raw value or an unavailability
reason. Layer, cost-tracking, severity, and sast_fp availability rules are
applied before any arithmetic; zero-denominator cases either score 0 with a
degenerate note (detection-style ratios, where silence should be penalized)
or go unavailable (vacuous populations that carry no signal).
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterator, Literal

from .results import (
    ConfusionMatrix,
    Layer,
    ParseStatus,
    RunRecord,
    Severity,
    TaskResult,
    TaskType,
    Verdict,
    confusion,
)

SEVERITY_WEIGHTS = {
    Severity.CRITICAL: 4,
    Severity.HIGH: 3,
    Severity.MEDIUM: 2,
    Severity.LOW: 1,
}


class Category(str, Enum):
    DETECTION = "Detection"
    COVERAGE = "Coverage"
    REASONING = "Reasoning"
    EFFICIENCY = "Efficiency"
    TOOL_USE = "ToolUse"
    RISK = "Risk"
    ROBUSTNESS = "Robustness"


CATEGORY_LONG_NAMES = {
    Category.DETECTION: "Detection",
    Category.COVERAGE: "Coverage & Consistency",
    Category.REASONING: "Reasoning & Evidence",
    Category.EFFICIENCY: "Operational Efficiency",
    Category.TOOL_USE: "Tool-Use & Navigation",
    Category.RISK: "Risk & Severity",
    Category.ROBUSTNESS: "Robustness",
}


class Strategy(str, Enum):
    RATIO = "ratio"
    MCC = "mcc"
    LOWER_IS_BETTER = "lower_is_better"
    HIGHER_IS_BETTER = "higher_is_better"


class Dim(str, Enum):
    """Dimension identifiers D1..D35."""

    D1 = "D1"; D2 = "D2"; D3 = "D3"; D4 = "D4"; D5 = "D5"; D6 = "D6"; D7 = "D7"
    D8 = "D8"; D9 = "D9"; D10 = "D10"; D11 = "D11"; D12 = "D12"; D13 = "D13"
    D14 = "D14"; D15 = "D15"; D16 = "D16"; D17 = "D17"; D18 = "D18"; D19 = "D19"
    D20 = "D20"; D21 = "D21"; D22 = "D22"; D23 = "D23"; D24 = "D24"; D25 = "D25"
    D26 = "D26"; D27 = "D27"; D28 = "D28"; D29 = "D29"; D30 = "D30"; D31 = "D31"
    D32 = "D32"; D33 = "D33"; D34 = "D34"; D35 = "D35"

    @property
    def index(self) -> int:
        return int(self.value[1:])

    @property
    def category(self) -> Category:
        return _CATALOG[self].category

    @property
    def strategy(self) -> Strategy:
        return _CATALOG[self].strategy

    @property
    def display_name(self) -> str:
        return _CATALOG[self].name


ALL_DIMS: tuple[Dim, ...] = tuple(sorted(Dim, key=lambda d: d.index))


@dataclass(frozen=True)
class DimensionInfo:
    name: str
    category: Category
    strategy: Strategy


def _category_for(index: int) -> Category:
    if index <= 8:
        return Category.DETECTION
    if index <= 13:
        return Category.COVERAGE
    if index <= 17:
        return Category.REASONING
    if index <= 23:
        return Category.EFFICIENCY
    if index <= 27:
        return Category.TOOL_USE
    if index <= 30:
        return Category.RISK
    return Category.ROBUSTNESS


def _strategy_for(index: int) -> Strategy:
    if index == 1:
        return Strategy.MCC
    if index in (18, 19, 21, 23, 24, 25):
        return Strategy.LOWER_IS_BETTER
    if index in (20, 22):
        return Strategy.HIGHER_IS_BETTER
    return Strategy.RATIO


_NAMES = {
    1: "MCC", 2: "Recall", 3: "Precision", 4: "F1", 5: "True Negative Rate",
    6: "CWE Accuracy", 7: "Mean Location IoU", 8: "Actionable Finding Rate",
    9: "CWE Coverage Breadth", 10: "Worst Category Floor",
    11: "Cross-Language Consistency", 12: "Worst Language Floor",
    13: "SAST FP Filtering", 14: "Evidence Completeness", 15: "Reasoning Presence",
    16: "Reasoning + Correct Verdict", 17: "FP Reasoning Quality",
    18: "Cost per Task", 19: "Cost per True Positive", 20: "MCC per Dollar",
    21: "Wall Time per Task", 22: "Throughput", 23: "Tokens per Task",
    24: "Tool Calls per Task", 25: "Turns per Task", 26: "Navigation Efficiency",
    27: "Tool Effectiveness", 28: "Severity-Weighted Recall", 29: "Critical Miss Rate",
    30: "Severity Coverage", 31: "Parse Success Rate", 32: "Format Compliance",
    33: "Error Rate", 34: "Autonomous Completion", 35: "Graceful Degradation",
}

_CATALOG: dict[Dim, DimensionInfo] = {
    dim: DimensionInfo(
        name=_NAMES[dim.index],
        category=_category_for(dim.index),
        strategy=_strategy_for(dim.index),
    )
    for dim in ALL_DIMS
}

# Dimensions knocked out by run-level availability flags.
LAYER_CIP_DIMS = frozenset({Dim.D7, Dim.D8, Dim.D24, Dim.D25, Dim.D26, Dim.D27})
COST_DIMS = frozenset({Dim.D18, Dim.D19, Dim.D20})
SEVERITY_DIMS = frozenset({Dim.D28, Dim.D29, Dim.D30})
SAST_DIMS = frozenset({Dim.D13})

ReasonKind = Literal["layer_cip", "no_cost", "no_severity", "no_sast_fp_tasks", "degenerate"]


@dataclass(frozen=True)
class Unavailable:
    kind: ReasonKind
    detail: str | None = None

    def __str__(self) -> str:
        return self.kind if self.detail is None else f"{self.kind}: {self.detail}"

    @classmethod
    def parse(cls, text: str) -> "Unavailable":
        kind, _, detail = text.partition(": ")
        return cls(kind, detail or None)  # type: ignore[arg-type]


@dataclass(frozen=True)
class DimensionValue:
    dim: Dim
    raw: float | None = None
    reason: Unavailable | None = None
    note: str | None = None

    def __post_init__(self) -> None:
        if (self.raw is None) == (self.reason is None):
            raise ValueError(f"{self.dim.value}: exactly one of raw/reason must be set")

    @property
    def available(self) -> bool:
        return self.reason is None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"id": self.dim.value}
        if self.available:
            out["status"] = "available"
            out["raw"] = self.raw
            if self.note is not None:
                out["note"] = self.note
        else:
            out["status"] = "unavailable"
            out["reason"] = str(self.reason)
        return out


@dataclass(frozen=True)
class DimensionVector:
    """All 35 dimension results for one run, ordered D1..D35."""

    run_id: str
    values: tuple[DimensionValue, ...]

    def __post_init__(self) -> None:
        if tuple(v.dim for v in self.values) != ALL_DIMS:
            raise ValueError("expected exactly one value per dimension, in order")

    def __getitem__(self, dim: Dim) -> DimensionValue:
        return self.values[dim.index - 1]

    def __iter__(self) -> Iterator[DimensionValue]:
        return iter(self.values)

    def to_dict(self) -> dict[str, Any]:
        return {"run_id": self.run_id, "values": [v.to_dict() for v in self.values]}


def _f1(tp: int, fp: int, fn: int) -> float:
    """F1 with zero-denominator precision/recall treated as 0."""
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def per_group_f1(run: RunRecord, group_by: Literal["category", "language"]) -> dict[str, float]:
    """F1 per category or language, over the group-restricted confusion matrix."""
    attr = "task_category" if group_by == "category" else "task_language"
    counts: dict[str, list[int]] = {}
    for task in run.tasks:
        if task.task_type is TaskType.SAST_FP:
            continue
        cell = counts.setdefault(getattr(task, attr), [0, 0, 0])  # tp, fp, fn
        if task.task_type is TaskType.TRUE_POSITIVE:
            if task.detected:
                cell[0] += 1
            else:
                cell[2] += 1
        elif task.detected:
            cell[1] += 1
    return {group: _f1(tp, fp, fn) for group, (tp, fp, fn) in counts.items()}


def verdict_correct(task: TaskResult) -> bool:
    """Detected for true_positive tasks; not flagged for the rest."""
    if task.task_type is TaskType.TRUE_POSITIVE:
        return task.detected
    return not task.detected


def _earned_any(task: TaskResult) -> bool:
    return verdict_correct(task) or task.cwe_match == 1 or task.location_match == 1


def compute_all(run: RunRecord) -> DimensionVector:
    """Evaluate every dimension for one run."""
    tasks = run.tasks
    n_tasks = len(tasks)
    pos = [t for t in tasks if t.task_type is TaskType.TRUE_POSITIVE]
    neg = [t for t in tasks if t.task_type is TaskType.POST_PATCH]
    sast = [t for t in tasks if t.task_type is TaskType.SAST_FP]
    detected_pos = [t for t in pos if t.detected]
    cm = confusion(run)

    values: dict[Dim, DimensionValue] = {}

    def available(dim: Dim, raw: float, note: str | None = None) -> None:
        values[dim] = DimensionValue(dim, raw=float(raw), note=note)

    def unavailable(dim: Dim, kind: ReasonKind, detail: str | None = None) -> None:
        values[dim] = DimensionValue(dim, reason=Unavailable(kind, detail))

    # Run-level availability gates come first.
    if run.layer is Layer.CIP:
        for dim in sorted(LAYER_CIP_DIMS, key=lambda d: d.index):
            unavailable(dim, "layer_cip")
    if not run.cost_tracked:
        for dim in sorted(COST_DIMS, key=lambda d: d.index):
            unavailable(dim, "no_cost")
    if not run.severity_present:
        for dim in sorted(SEVERITY_DIMS, key=lambda d: d.index):
            unavailable(dim, "no_severity")
    if not run.has_sast_fp:
        unavailable(Dim.D13, "no_sast_fp_tasks")

    def gated(dim: Dim) -> bool:
        return dim in values

    # --- Detection (D1-D8) ---
    if not gated(Dim.D1):
        margins = (cm.tp + cm.fp, cm.tp + cm.fn, cm.tn + cm.fp, cm.tn + cm.fn)
        if 0 in margins:
            available(Dim.D1, 0.0, note="zero confusion-matrix margin")
        else:
            product = 1.0
            for m in margins:
                product *= m
            available(Dim.D1, (cm.tp * cm.tn - cm.fp * cm.fn) / product ** 0.5)
    mcc_raw = values[Dim.D1].raw if values[Dim.D1].available else 0.0

    if not pos:
        unavailable(Dim.D2, "degenerate", "no true_positive tasks")
    else:
        available(Dim.D2, cm.tp / len(pos))
    if cm.tp + cm.fp == 0:
        available(Dim.D3, 0.0, note="no vulnerable verdicts emitted")
    else:
        available(Dim.D3, cm.tp / (cm.tp + cm.fp))
    if not pos:
        unavailable(Dim.D4, "degenerate", "no true_positive tasks")
    else:
        available(Dim.D4, _f1(cm.tp, cm.fp, cm.fn))
    if not neg:
        unavailable(Dim.D5, "degenerate", "no post_patch tasks")
    else:
        available(Dim.D5, cm.tn / len(neg))

    if cm.tp == 0:
        available(Dim.D6, 0.0, note="no true positives detected")
    else:
        available(Dim.D6, sum(1 for t in detected_pos if t.cwe_match == 1) / cm.tp)
    if not gated(Dim.D7):
        if not detected_pos:
            available(Dim.D7, 0.0, note="no true positives detected")
        else:
            available(Dim.D7, sum(t.location_iou or 0.0 for t in detected_pos) / len(detected_pos))
    if not gated(Dim.D8):
        if cm.tp == 0:
            available(Dim.D8, 0.0, note="no true positives detected")
        else:
            fully = sum(1 for t in detected_pos if t.cwe_match == 1 and t.location_match == 1)
            available(Dim.D8, fully / cm.tp)

    # --- Coverage & Consistency (D9-D13) ---
    cats_pos = {t.task_category for t in pos}
    if not cats_pos:
        unavailable(Dim.D9, "degenerate", "no true_positive tasks")
    else:
        hit = {t.task_category for t in detected_pos}
        available(Dim.D9, len(hit) / len(cats_pos))

    cat_f1 = per_group_f1(run, "category")
    if not cat_f1:
        unavailable(Dim.D10, "degenerate", "no categories present")
    else:
        available(Dim.D10, min(cat_f1.values()))

    lang_f1 = per_group_f1(run, "language")
    if not lang_f1:
        unavailable(Dim.D11, "degenerate", "no languages present")
        unavailable(Dim.D12, "degenerate", "no languages present")
    else:
        available(Dim.D11, 1.0 - statistics.pstdev(lang_f1.values()))
        available(Dim.D12, min(lang_f1.values()))

    if not gated(Dim.D13):
        cleared = sum(1 for t in sast if t.predicted_verdict is Verdict.NOT_VULNERABLE)
        available(Dim.D13, cleared / len(sast))

    # --- Reasoning & Evidence (D14-D17) ---
    if cm.tp == 0:
        available(Dim.D14, 0.0, note="no true positives detected")
    else:
        chains = sum(
            1 for t in detected_pos
            if t.evidence_source and t.evidence_sink and t.evidence_flow
        )
        available(Dim.D14, chains / cm.tp)
    available(Dim.D15, sum(1 for t in tasks if t.reasoning_present) / n_tasks)
    available(
        Dim.D16,
        sum(1 for t in tasks if t.reasoning_present and verdict_correct(t)) / n_tasks,
    )
    false_pos = [t for t in neg if t.detected]
    if not false_pos:
        unavailable(Dim.D17, "degenerate", "no false positives")
    else:
        available(Dim.D17, sum(1 for t in false_pos if t.reasoning_present) / len(false_pos))

    # --- Operational Efficiency (D18-D23) ---
    if not gated(Dim.D18):
        total_cost = sum(t.cost_usd or 0.0 for t in tasks)
        available(Dim.D18, total_cost / n_tasks)
        if cm.tp == 0:
            unavailable(Dim.D19, "degenerate", "no true positives detected")
        else:
            available(Dim.D19, total_cost / cm.tp)
        if total_cost == 0:
            unavailable(Dim.D20, "degenerate", "zero total cost")
        else:
            available(Dim.D20, mcc_raw / total_cost)

    total_time = sum(t.wall_time_s for t in tasks)
    available(Dim.D21, total_time / n_tasks)
    if total_time == 0:
        unavailable(Dim.D22, "degenerate", "zero total wall time")
    else:
        available(Dim.D22, 60.0 * n_tasks / total_time)
    available(Dim.D23, sum(t.total_tokens for t in tasks) / n_tasks)

    # --- Tool-Use & Navigation (D24-D27); absent telemetry counts as zero ---
    if not gated(Dim.D24):
        total_calls = sum(t.tool_calls or 0 for t in tasks)
        available(Dim.D24, total_calls / n_tasks)
        available(Dim.D25, sum(t.turns or 0 for t in tasks) / n_tasks)
        if total_calls == 0:
            unavailable(Dim.D26, "degenerate", "no tool calls recorded")
        else:
            relevant = sum(t.tool_calls_relevant or 0 for t in tasks)
            available(Dim.D26, relevant / total_calls)
        tool_users = [t for t in tasks if (t.tool_calls or 0) >= 1]
        if not tool_users:
            unavailable(Dim.D27, "degenerate", "no tool-using tasks")
        else:
            available(Dim.D27, sum(1 for t in tool_users if _earned_any(t)) / len(tool_users))

    # --- Risk & Severity (D28-D30); severity exists on TP tasks only ---
    if not gated(Dim.D28):
        sev_pos = [t for t in pos if t.task_severity is not None]
        total_w = sum(SEVERITY_WEIGHTS[t.task_severity] for t in sev_pos)
        hit_w = sum(SEVERITY_WEIGHTS[t.task_severity] for t in sev_pos if t.detected)
        available(Dim.D28, hit_w / total_w)

        crit_high = [t for t in sev_pos if t.task_severity in (Severity.CRITICAL, Severity.HIGH)]
        if not crit_high:
            unavailable(Dim.D29, "degenerate", "no critical/high severity tasks")
        else:
            missed = sum(1 for t in crit_high if not t.detected)
            available(Dim.D29, 1.0 - missed / len(crit_high))

        tiers = {t.task_severity for t in sev_pos}
        hit_tiers = {t.task_severity for t in sev_pos if t.detected}
        available(Dim.D30, len(hit_tiers) / len(tiers))

    # --- Robustness (D31-D35) ---
    parsed = sum(1 for t in tasks if t.parse_status in (ParseStatus.FULL, ParseStatus.PARTIAL))
    available(Dim.D31, parsed / n_tasks)
    available(Dim.D32, sum(1 for t in tasks if t.parse_status is ParseStatus.FULL) / n_tasks)
    available(Dim.D33, 1.0 - sum(1 for t in tasks if t.errored) / n_tasks)
    completed = sum(1 for t in tasks if not t.errored and t.parse_status is not ParseStatus.FAILED)
    available(Dim.D34, completed / n_tasks)

    # D35: category accuracy gap between common and rare, split at the median
    # TP-task count; micro recall within each half.
    tp_counts: dict[str, int] = {}
    det_counts: dict[str, int] = {}
    for t in pos:
        tp_counts[t.task_category] = tp_counts.get(t.task_category, 0) + 1
        if t.detected:
            det_counts[t.task_category] = det_counts.get(t.task_category, 0) + 1
    if not tp_counts:
        unavailable(Dim.D35, "degenerate", "no true_positive tasks")
    else:
        median = statistics.median(tp_counts.values())
        common = [c for c, n in tp_counts.items() if n >= median]
        rare = [c for c, n in tp_counts.items() if n < median]
        if not common or not rare:
            unavailable(Dim.D35, "degenerate", "no common/rare category split")
        else:
            acc_common = sum(det_counts.get(c, 0) for c in common) / sum(tp_counts[c] for c in common)
            acc_rare = sum(det_counts.get(c, 0) for c in rare) / sum(tp_counts[c] for c in rare)
            available(Dim.D35, 1.0 - abs(acc_common - acc_rare))

    return DimensionVector(run_id=run.run_id, values=tuple(values[d] for d in ALL_DIMS))
