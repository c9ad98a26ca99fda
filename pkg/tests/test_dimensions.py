from __future__ import annotations

import pytest

from conftest import make_run, make_task
from rolescore.dimensions import (
    ALL_DIMS,
    Category,
    Dim,
    Strategy,
    compute_all,
    per_group_f1,
)
from rolescore.results import Layer, ParseStatus, TaskType


class TestCatalog:
    def test_category_ranges(self):
        bands = [
            (range(1, 9), Category.DETECTION),
            (range(9, 14), Category.COVERAGE),
            (range(14, 18), Category.REASONING),
            (range(18, 24), Category.EFFICIENCY),
            (range(24, 28), Category.TOOL_USE),
            (range(28, 31), Category.RISK),
            (range(31, 36), Category.ROBUSTNESS),
        ]
        for indices, category in bands:
            for i in indices:
                assert Dim(f"D{i}").category is category

    def test_strategies(self):
        assert Dim.D1.strategy is Strategy.MCC
        for i in (18, 19, 21, 23, 24, 25):
            assert Dim(f"D{i}").strategy is Strategy.LOWER_IS_BETTER
        for i in (20, 22):
            assert Dim(f"D{i}").strategy is Strategy.HIGHER_IS_BETTER
        ratio = [d for d in ALL_DIMS if d.strategy is Strategy.RATIO]
        assert len(ratio) == 35 - 1 - 6 - 2

    def test_every_dim_once(self):
        assert len(ALL_DIMS) == 35
        assert [d.index for d in ALL_DIMS] == list(range(1, 36))

    def test_reason_string_round_trip(self):
        from rolescore.dimensions import Unavailable

        for reason in (Unavailable("layer_cip"), Unavailable("degenerate", "no data")):
            assert Unavailable.parse(str(reason)) == reason


def six_task_run(layer=Layer.TU):
    """tp=2, fn=1, fp=1, tn=2 with known extras on the detected tasks."""
    return make_run([
        make_task(TaskType.TRUE_POSITIVE, detected=True, cwe_match=1,
                  location_match=1, location_iou=0.8, evidence=True,
                  tool_calls=3, tool_calls_relevant=2, turns=2),
        make_task(TaskType.TRUE_POSITIVE, detected=True, cwe_match=0,
                  location_match=0, location_iou=0.2,
                  tool_calls=5, tool_calls_relevant=1, turns=3),
        make_task(TaskType.TRUE_POSITIVE, detected=False, tool_calls=1,
                  tool_calls_relevant=0, turns=1),
        make_task(TaskType.POST_PATCH, detected=True, tool_calls=2,
                  tool_calls_relevant=2, turns=2),
        make_task(TaskType.POST_PATCH, detected=False, tool_calls=4,
                  tool_calls_relevant=2, turns=1),
        make_task(TaskType.POST_PATCH, detected=False, reasoning=False,
                  tool_calls=0, tool_calls_relevant=0, turns=1),
    ], layer=layer)


class TestDetectionDims:
    def test_mcc_family_hand_derived(self):
        dims = compute_all(six_task_run())
        # margins are all 3, so mcc = (4 - 1) / sqrt(81)
        assert dims[Dim.D1].raw == pytest.approx(1 / 3)
        assert dims[Dim.D2].raw == pytest.approx(2 / 3)
        assert dims[Dim.D3].raw == pytest.approx(2 / 3)
        assert dims[Dim.D4].raw == pytest.approx(2 / 3)
        assert dims[Dim.D5].raw == pytest.approx(2 / 3)

    def test_f1_is_harmonic_mean(self):
        dims = compute_all(six_task_run())
        p, r = dims[Dim.D3].raw, dims[Dim.D2].raw
        assert dims[Dim.D4].raw == pytest.approx(2 * p * r / (p + r))

    def test_cwe_location_and_evidence_rates(self):
        dims = compute_all(six_task_run())
        assert dims[Dim.D6].raw == pytest.approx(1 / 2)   # one cwe hit of 2 detected
        assert dims[Dim.D7].raw == pytest.approx(0.5)     # (0.8 + 0.2) / 2
        assert dims[Dim.D8].raw == pytest.approx(1 / 2)   # verdict+cwe+location on one
        assert dims[Dim.D14].raw == pytest.approx(1 / 2)  # full chain on one

    def test_silent_model_scores_zero_not_excluded(self):
        run = make_run([
            make_task(TaskType.TRUE_POSITIVE, detected=None),
            make_task(TaskType.POST_PATCH, detected=None),
        ])
        dims = compute_all(run)
        assert dims[Dim.D1].raw == 0.0 and dims[Dim.D1].note
        assert dims[Dim.D2].raw == 0.0
        assert dims[Dim.D3].raw == 0.0 and dims[Dim.D3].note
        for d in (Dim.D6, Dim.D7, Dim.D8, Dim.D14):
            assert dims[d].available and dims[d].raw == 0.0


class TestAvailabilityRules:
    def test_cip_excludes_location_and_tool_dims(self):
        run = make_run([
            make_task(TaskType.TRUE_POSITIVE, detected=True),
            make_task(TaskType.POST_PATCH, detected=False),
        ], layer=Layer.CIP)
        dims = compute_all(run)
        for d in (Dim.D7, Dim.D8, Dim.D24, Dim.D25, Dim.D26, Dim.D27):
            assert not dims[d].available
            assert dims[d].reason.kind == "layer_cip"

    def test_untracked_cost_excludes_cost_dims(self):
        run = make_run([
            make_task(TaskType.TRUE_POSITIVE, detected=True, cost_usd=None),
            make_task(TaskType.POST_PATCH, detected=False),
        ])
        dims = compute_all(run)
        for d in (Dim.D18, Dim.D19, Dim.D20):
            assert dims[d].reason.kind == "no_cost"

    def test_no_severity_excludes_risk_dims(self):
        dims = compute_all(six_task_run())
        for d in (Dim.D28, Dim.D29, Dim.D30):
            assert dims[d].reason.kind == "no_severity"

    def test_no_sast_tasks_excludes_d13(self):
        dims = compute_all(six_task_run())
        assert dims[Dim.D13].reason.kind == "no_sast_fp_tasks"

    def test_availability_is_deterministic(self):
        run = six_task_run(layer=Layer.CIP if False else Layer.TU)
        first = [(v.available, str(v.reason)) for v in compute_all(run)]
        second = [(v.available, str(v.reason)) for v in compute_all(run)]
        assert first == second


class TestRiskDims:
    def test_severity_weighted_recall_hand_derived(self):
        run = make_run([
            make_task(TaskType.TRUE_POSITIVE, detected=True, severity="critical"),
            make_task(TaskType.TRUE_POSITIVE, detected=False, severity="high"),
        ])
        dims = compute_all(run)
        assert dims[Dim.D28].raw == pytest.approx(4 / 7)
        assert dims[Dim.D29].raw == pytest.approx(0.5)
        assert dims[Dim.D30].raw == pytest.approx(0.5)

    def test_no_critical_or_high_degenerate(self):
        run = make_run([
            make_task(TaskType.TRUE_POSITIVE, detected=True, severity="low"),
            make_task(TaskType.POST_PATCH, detected=False),
        ])
        dims = compute_all(run)
        assert dims[Dim.D28].available
        assert dims[Dim.D29].reason.kind == "degenerate"


class TestRobustnessDims:
    def test_perfect_run(self):
        run = make_run([
            make_task(TaskType.TRUE_POSITIVE, detected=True),
            make_task(TaskType.POST_PATCH, detected=False),
        ])
        dims = compute_all(run)
        for d in (Dim.D31, Dim.D32, Dim.D33, Dim.D34):
            assert dims[d].raw == 1.0

    def test_parse_and_error_counting(self):
        run = make_run([
            make_task(TaskType.TRUE_POSITIVE, detected=True, parse_status=ParseStatus.PARTIAL),
            make_task(TaskType.TRUE_POSITIVE, parse_status=ParseStatus.FAILED),
            make_task(TaskType.POST_PATCH, detected=False, errored=True),
            make_task(TaskType.POST_PATCH, detected=False),
        ])
        dims = compute_all(run)
        assert dims[Dim.D31].raw == pytest.approx(3 / 4)
        assert dims[Dim.D32].raw == pytest.approx(2 / 4)
        assert dims[Dim.D33].raw == pytest.approx(3 / 4)
        assert dims[Dim.D34].raw == pytest.approx(2 / 4)

    def test_ordering_invariants(self):
        dims = compute_all(six_task_run())
        assert dims[Dim.D32].raw <= dims[Dim.D31].raw
        assert dims[Dim.D34].raw <= dims[Dim.D31].raw
        assert dims[Dim.D34].raw <= dims[Dim.D33].raw

    def test_graceful_degradation_split(self):
        # common: 4 TPs at 3/4 recall; rare: 1 TP missed entirely
        tasks = [make_task(TaskType.TRUE_POSITIVE, detected=i < 3, category="Injection")
                 for i in range(4)]
        tasks.append(make_task(TaskType.TRUE_POSITIVE, detected=False, category="SSRF"))
        dims = compute_all(make_run(tasks))
        assert dims[Dim.D35].raw == pytest.approx(1 - abs(3 / 4 - 0))

    def test_graceful_degradation_needs_both_groups(self):
        tasks = [make_task(TaskType.TRUE_POSITIVE, detected=True, category="Injection"),
                 make_task(TaskType.TRUE_POSITIVE, detected=True, category="SSRF")]
        dims = compute_all(make_run(tasks))
        assert dims[Dim.D35].reason.kind == "degenerate"


class TestToolDims:
    def test_tool_usage_means(self):
        dims = compute_all(six_task_run())
        assert dims[Dim.D24].raw == pytest.approx(15 / 6)
        assert dims[Dim.D25].raw == pytest.approx(10 / 6)
        assert dims[Dim.D26].raw == pytest.approx(7 / 15)
        # five tool-using tasks; earners: the two detected TPs and one
        # correctly cleared PP (the other cleared PP made no tool calls)
        assert dims[Dim.D27].raw == pytest.approx(3 / 5)

    def test_no_tool_calls_degenerate(self):
        run = make_run([
            make_task(TaskType.TRUE_POSITIVE, detected=True, tool_calls=0, turns=1),
            make_task(TaskType.POST_PATCH, detected=False, tool_calls=0, turns=1),
        ])
        dims = compute_all(run)
        assert dims[Dim.D26].reason.kind == "degenerate"
        assert dims[Dim.D27].reason.kind == "degenerate"


class TestReasoningDims:
    def test_presence_and_correctness(self):
        dims = compute_all(six_task_run())
        assert dims[Dim.D15].raw == pytest.approx(5 / 6)
        # correct with reasoning: 2 detected TPs + 1 cleared PP (other cleared
        # PP has no reasoning)
        assert dims[Dim.D16].raw == pytest.approx(3 / 6)
        assert dims[Dim.D17].raw == pytest.approx(1.0)

    def test_fp_reasoning_needs_false_positives(self):
        run = make_run([
            make_task(TaskType.TRUE_POSITIVE, detected=True),
            make_task(TaskType.POST_PATCH, detected=False),
        ])
        assert compute_all(run)[Dim.D17].reason.kind == "degenerate"


# Per-category F1 realizations rounding to a published worst-performer row.
QWEN_ROW = {
    "Broken Access Control": (8, 55, 54, 0.128),
    "Cryptographic Failures": (4, 30, 30, 0.118),
    "Auth Failures": (3, 27, 27, 0.100),
    "Improper Input Validation": (2, 14, 14, 0.125),
    "Injection": (2, 31, 30, 0.062),
    "Memory Safety": (2, 5, 4, 0.308),
    "SSRF": (11, 11, 10, 0.512),
    "Data Integrity Failures": (2, 8, 8, 0.200),
}


def qwen_like_run():
    tasks = []
    for category, (tp, fn, fp, _) in QWEN_ROW.items():
        tasks += [make_task(TaskType.TRUE_POSITIVE, detected=True, category=category)
                  for _ in range(tp)]
        tasks += [make_task(TaskType.TRUE_POSITIVE, detected=False, category=category)
                  for _ in range(fn)]
        tasks += [make_task(TaskType.POST_PATCH, detected=True, category=category)
                  for _ in range(fp)]
        tasks += [make_task(TaskType.POST_PATCH, detected=False, category=category)
                  for _ in range(fp)]
    return make_run(tasks)


class TestPerGroupF1:
    def test_single_perfect_group(self):
        run = make_run([
            make_task(TaskType.TRUE_POSITIVE, detected=True),
            make_task(TaskType.POST_PATCH, detected=False),
        ])
        assert per_group_f1(run, "category") == {"Injection": 1.0}

    def test_published_worst_row_reproduced(self):
        run = qwen_like_run()
        by_cat = per_group_f1(run, "category")
        for category, (_, _, _, printed) in QWEN_ROW.items():
            assert round(by_cat[category], 3) == printed
        dims = compute_all(run)
        assert dims[Dim.D10].raw == min(by_cat.values())
        assert round(dims[Dim.D10].raw, 3) == 0.062

    def test_floor_bounds_every_group(self):
        run = qwen_like_run()
        dims = compute_all(run)
        for f1 in per_group_f1(run, "category").values():
            assert dims[Dim.D10].raw <= f1 + 1e-12
        for f1 in per_group_f1(run, "language").values():
            assert dims[Dim.D12].raw <= f1 + 1e-12

    def test_zero_spread_languages(self):
        tasks = []
        for lang in ("python", "go", "rust"):
            tasks.append(make_task(TaskType.TRUE_POSITIVE, detected=True, language=lang))
            tasks.append(make_task(TaskType.TRUE_POSITIVE, detected=False, language=lang))
            tasks.append(make_task(TaskType.POST_PATCH, detected=False, language=lang))
        dims = compute_all(make_run(tasks))
        by_lang = per_group_f1(make_run(tasks), "language")
        assert all(f1 == pytest.approx(2 / 3) for f1 in by_lang.values())
        assert dims[Dim.D11].raw == pytest.approx(1.0)

    def test_coverage_breadth(self):
        tasks = [
            make_task(TaskType.TRUE_POSITIVE, detected=True, category="Injection"),
            make_task(TaskType.TRUE_POSITIVE, detected=False, category="SSRF"),
            make_task(TaskType.TRUE_POSITIVE, detected=False, category="SSRF"),
        ]
        assert compute_all(make_run(tasks))[Dim.D9].raw == pytest.approx(1 / 2)


class TestRawBounds:
    def test_ratio_dims_stay_in_unit_interval(self):
        for run in (six_task_run(), qwen_like_run()):
            for value in compute_all(run):
                if value.available and value.dim.strategy is Strategy.RATIO:
                    assert 0.0 <= value.raw <= 1.0
                if value.dim is Dim.D1 and value.available:
                    assert -1.0 <= value.raw <= 1.0
