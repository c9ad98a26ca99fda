"""Brute-force re-derivation of every dimension, for verifying the engine.

This module deliberately shares no computation with the dimension engine:
no confusion helper, no grouped-F1 helper, hand-rolled stddev and median.
Each dimension is recomputed by direct enumeration over the task list.
Intended for tests; quadratic-ish passes are fine at oracle scale.
"""

from __future__ import annotations

from .dimensions import ALL_DIMS, Dim, DimensionValue, DimensionVector, Unavailable
from .results import RunRecord


def _mean(xs: list[float]) -> float:
    return sum(xs) / len(xs)


def _pop_std(xs: list[float]) -> float:
    m = _mean(xs)
    return (sum((x - m) ** 2 for x in xs) / len(xs)) ** 0.5


def _median(xs: list[int]) -> float:
    ordered = sorted(xs)
    n = len(ordered)
    mid = n // 2
    if n % 2 == 1:
        return float(ordered[mid])
    return (ordered[mid - 1] + ordered[mid]) / 2.0


def _naive_f1(tasks: list, predicate) -> float:
    tp = sum(1 for t in tasks if predicate(t) and t.task_type.value == "true_positive"
             and t.predicted_verdict is not None and t.predicted_verdict.value == "vulnerable")
    fn = sum(1 for t in tasks if predicate(t) and t.task_type.value == "true_positive"
             and not (t.predicted_verdict is not None and t.predicted_verdict.value == "vulnerable"))
    fp = sum(1 for t in tasks if predicate(t) and t.task_type.value == "post_patch"
             and t.predicted_verdict is not None and t.predicted_verdict.value == "vulnerable")
    p = tp / (tp + fp) if tp + fp > 0 else 0.0
    r = tp / (tp + fn) if tp + fn > 0 else 0.0
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def oracle_dimensions(run: RunRecord) -> DimensionVector:
    """Recompute all 35 dimensions by direct task enumeration."""
    tasks = list(run.tasks)
    n = len(tasks)

    def is_tp(t) -> bool:
        return t.task_type.value == "true_positive"

    def is_pp(t) -> bool:
        return t.task_type.value == "post_patch"

    def is_sast(t) -> bool:
        return t.task_type.value == "sast_fp"

    def flagged(t) -> bool:
        return t.predicted_verdict is not None and t.predicted_verdict.value == "vulnerable"

    def cleared(t) -> bool:
        return t.predicted_verdict is not None and t.predicted_verdict.value == "not_vulnerable"

    def correct(t) -> bool:
        return flagged(t) if is_tp(t) else not flagged(t)

    layer_cip = run.layer.value == "CIP"
    cost_tracked = all(t.cost_usd is not None for t in tasks)
    severity_present = any(t.task_severity is not None for t in tasks if is_tp(t))
    has_sast = any(is_sast(t) for t in tasks)

    out: dict[Dim, DimensionValue] = {}

    def ok(dim: Dim, raw: float, note: str | None = None) -> None:
        out[dim] = DimensionValue(dim, raw=float(raw), note=note)

    def gone(dim: Dim, kind: str, detail: str | None = None) -> None:
        out[dim] = DimensionValue(dim, reason=Unavailable(kind, detail))  # type: ignore[arg-type]

    tp = sum(1 for t in tasks if is_tp(t) and flagged(t))
    fn = sum(1 for t in tasks if is_tp(t) and not flagged(t))
    fp = sum(1 for t in tasks if is_pp(t) and flagged(t))
    tn = sum(1 for t in tasks if is_pp(t) and not flagged(t))
    n_pos = tp + fn
    n_neg = fp + tn

    # D1
    if 0 in (tp + fp, tp + fn, tn + fp, tn + fn):
        ok(Dim.D1, 0.0, note="zero confusion-matrix margin")
    else:
        denom = ((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)) ** 0.5
        ok(Dim.D1, (tp * tn - fp * fn) / denom)
    d1_raw = out[Dim.D1].raw or 0.0

    # D2-D5
    if n_pos == 0:
        gone(Dim.D2, "degenerate", "no true_positive tasks")
        gone(Dim.D4, "degenerate", "no true_positive tasks")
    else:
        ok(Dim.D2, tp / n_pos)
        p = tp / (tp + fp) if tp + fp > 0 else 0.0
        r = tp / n_pos
        ok(Dim.D4, 2 * p * r / (p + r) if p + r > 0 else 0.0)
    if tp + fp == 0:
        ok(Dim.D3, 0.0, note="no vulnerable verdicts emitted")
    else:
        ok(Dim.D3, tp / (tp + fp))
    if n_neg == 0:
        gone(Dim.D5, "degenerate", "no post_patch tasks")
    else:
        ok(Dim.D5, tn / n_neg)

    # D6
    if tp == 0:
        ok(Dim.D6, 0.0, note="no true positives detected")
    else:
        ok(Dim.D6, sum(1 for t in tasks if is_tp(t) and flagged(t) and t.cwe_match == 1) / tp)

    # D7, D8 (TU only)
    if layer_cip:
        gone(Dim.D7, "layer_cip")
        gone(Dim.D8, "layer_cip")
    else:
        hits = [t for t in tasks if is_tp(t) and flagged(t)]
        if not hits:
            ok(Dim.D7, 0.0, note="no true positives detected")
            ok(Dim.D8, 0.0, note="no true positives detected")
        else:
            total_iou = 0.0
            for t in hits:
                total_iou += t.location_iou if t.location_iou is not None else 0.0
            ok(Dim.D7, total_iou / len(hits))
            actionable = sum(1 for t in hits if t.cwe_match == 1 and t.location_match == 1)
            ok(Dim.D8, actionable / tp)

    # D9
    cats_with_tp = sorted({t.task_category for t in tasks if is_tp(t)})
    if not cats_with_tp:
        gone(Dim.D9, "degenerate", "no true_positive tasks")
    else:
        covered = 0
        for cat in cats_with_tp:
            if any(t.task_category == cat and is_tp(t) and flagged(t) for t in tasks):
                covered += 1
        ok(Dim.D9, covered / len(cats_with_tp))

    # D10: minimum per-category F1
    cats = sorted({t.task_category for t in tasks if not is_sast(t)})
    if not cats:
        gone(Dim.D10, "degenerate", "no categories present")
    else:
        ok(Dim.D10, min(
            _naive_f1(tasks, lambda t, c=cat: t.task_category == c) for cat in cats))

    # D11, D12: per-language F1 spread and floor
    langs = sorted({t.task_language for t in tasks if not is_sast(t)})
    if not langs:
        gone(Dim.D11, "degenerate", "no languages present")
        gone(Dim.D12, "degenerate", "no languages present")
    else:
        lang_f1 = [_naive_f1(tasks, lambda t, l=lang: t.task_language == l) for lang in langs]
        ok(Dim.D11, 1.0 - _pop_std(lang_f1))
        ok(Dim.D12, min(lang_f1))

    # D13
    if not has_sast:
        gone(Dim.D13, "no_sast_fp_tasks")
    else:
        sast = [t for t in tasks if is_sast(t)]
        ok(Dim.D13, sum(1 for t in sast if cleared(t)) / len(sast))

    # D14-D17
    if tp == 0:
        ok(Dim.D14, 0.0, note="no true positives detected")
    else:
        full_chain = sum(
            1 for t in tasks
            if is_tp(t) and flagged(t) and t.evidence_source and t.evidence_sink and t.evidence_flow)
        ok(Dim.D14, full_chain / tp)
    ok(Dim.D15, sum(1 for t in tasks if t.reasoning_present) / n)
    ok(Dim.D16, sum(1 for t in tasks if t.reasoning_present and correct(t)) / n)
    if fp == 0:
        gone(Dim.D17, "degenerate", "no false positives")
    else:
        ok(Dim.D17, sum(1 for t in tasks if is_pp(t) and flagged(t) and t.reasoning_present) / fp)

    # D18-D20
    if not cost_tracked:
        gone(Dim.D18, "no_cost")
        gone(Dim.D19, "no_cost")
        gone(Dim.D20, "no_cost")
    else:
        spend = sum(t.cost_usd for t in tasks)
        ok(Dim.D18, spend / n)
        if tp == 0:
            gone(Dim.D19, "degenerate", "no true positives detected")
        else:
            ok(Dim.D19, spend / tp)
        if spend == 0:
            gone(Dim.D20, "degenerate", "zero total cost")
        else:
            ok(Dim.D20, d1_raw / spend)

    # D21-D23
    elapsed = sum(t.wall_time_s for t in tasks)
    ok(Dim.D21, elapsed / n)
    if elapsed == 0:
        gone(Dim.D22, "degenerate", "zero total wall time")
    else:
        ok(Dim.D22, 60.0 * n / elapsed)
    ok(Dim.D23, sum(t.total_tokens for t in tasks) / n)

    # D24-D27
    if layer_cip:
        for dim in (Dim.D24, Dim.D25, Dim.D26, Dim.D27):
            gone(dim, "layer_cip")
    else:
        calls = sum(t.tool_calls if t.tool_calls is not None else 0 for t in tasks)
        ok(Dim.D24, calls / n)
        ok(Dim.D25, sum(t.turns if t.turns is not None else 0 for t in tasks) / n)
        if calls == 0:
            gone(Dim.D26, "degenerate", "no tool calls recorded")
        else:
            relevant = sum(
                t.tool_calls_relevant if t.tool_calls_relevant is not None else 0 for t in tasks)
            ok(Dim.D26, relevant / calls)
        users = [t for t in tasks if t.tool_calls is not None and t.tool_calls >= 1]
        if not users:
            gone(Dim.D27, "degenerate", "no tool-using tasks")
        else:
            scoring = sum(
                1 for t in users if correct(t) or t.cwe_match == 1 or t.location_match == 1)
            ok(Dim.D27, scoring / len(users))

    # D28-D30
    if not severity_present:
        for dim in (Dim.D28, Dim.D29, Dim.D30):
            gone(dim, "no_severity")
    else:
        w = {"critical": 4, "high": 3, "medium": 2, "low": 1}
        sev_tasks = [t for t in tasks if is_tp(t) and t.task_severity is not None]
        ok(Dim.D28,
           sum(w[t.task_severity.value] for t in sev_tasks if flagged(t))
           / sum(w[t.task_severity.value] for t in sev_tasks))
        urgent = [t for t in sev_tasks if t.task_severity.value in ("critical", "high")]
        if not urgent:
            gone(Dim.D29, "degenerate", "no critical/high severity tasks")
        else:
            ok(Dim.D29, 1.0 - sum(1 for t in urgent if not flagged(t)) / len(urgent))
        tiers = sorted({t.task_severity.value for t in sev_tasks})
        covered_tiers = sum(
            1 for tier in tiers
            if any(t.task_severity.value == tier and flagged(t) for t in sev_tasks))
        ok(Dim.D30, covered_tiers / len(tiers))

    # D31-D34
    ok(Dim.D31, sum(1 for t in tasks if t.parse_status.value in ("FULL", "PARTIAL")) / n)
    ok(Dim.D32, sum(1 for t in tasks if t.parse_status.value == "FULL") / n)
    ok(Dim.D33, 1.0 - sum(1 for t in tasks if t.errored) / n)
    ok(Dim.D34,
       sum(1 for t in tasks if not t.errored and t.parse_status.value != "FAILED") / n)

    # D35
    if not cats_with_tp:
        gone(Dim.D35, "degenerate", "no true_positive tasks")
    else:
        per_cat_n = {
            cat: sum(1 for t in tasks if is_tp(t) and t.task_category == cat)
            for cat in cats_with_tp
        }
        cut = _median(list(per_cat_n.values()))
        common = [c for c in cats_with_tp if per_cat_n[c] >= cut]
        rare = [c for c in cats_with_tp if per_cat_n[c] < cut]
        if not common or not rare:
            gone(Dim.D35, "degenerate", "no common/rare category split")
        else:
            def group_recall(group: list[str]) -> float:
                det = sum(1 for t in tasks
                          if is_tp(t) and t.task_category in group and flagged(t))
                tot = sum(per_cat_n[c] for c in group)
                return det / tot

            ok(Dim.D35, 1.0 - abs(group_recall(common) - group_recall(rare)))

    return DimensionVector(run_id=run.run_id, values=tuple(out[d] for d in ALL_DIMS))
