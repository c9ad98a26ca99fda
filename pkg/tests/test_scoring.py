from __future__ import annotations

import pytest

from conftest import make_run, make_task
from rolescore.dimensions import (
    ALL_DIMS,
    Category,
    Dim,
    DimensionValue,
    DimensionVector,
    Unavailable,
    compute_all,
)
from rolescore.profiles import RESEARCHER, RoleProfile
from rolescore.results import Layer, TaskType
from rolescore.scoring import NoAvailableDimensions, OutOfRange, decision_score, grade
from rolescore.synth import SplitMix64


def vector(run_id: str = "r", **raw_by_dim: float | None) -> DimensionVector:
    """DimensionVector with chosen raws; None marks a dim unavailable, and
    anything unmentioned is unavailable too."""
    values = []
    for dim in ALL_DIMS:
        raw = raw_by_dim.get(dim.value)
        if raw is None:
            values.append(DimensionValue(dim, reason=Unavailable("degenerate", "unset")))
        else:
            values.append(DimensionValue(dim, raw=raw))
    return DimensionVector(run_id=run_id, values=tuple(values))


class TestGrade:
    @pytest.mark.parametrize("score,letter", [
        (75.0, "A"), (74.999, "B"), (60.0, "B"), (59.999, "C"),
        (50.0, "C"), (49.999, "D"), (40.0, "D"), (39.999, "F"),
        (76.3, "A"), (45.2, "D"), (100.0, "A"), (0.0, "F"),
    ])
    def test_thresholds(self, score, letter):
        assert grade(score) == letter

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            grade(-0.1)
        with pytest.raises(OutOfRange):
            grade(100.1)


class TestDecisionScore:
    def test_two_dim_weighted_mean(self):
        # D31 ratio 1.0, D2 ratio 0.5, equal weights: (10 + 5) / 20 * 100
        dims = vector(D31=1.0, D2=0.5)
        profile = RoleProfile("mini", "", {Dim.D31: 10, Dim.D2: 10})
        report = decision_score(dims, profile)
        assert report.score == pytest.approx(75.0)
        assert report.grade == "A"
        assert report.available_weight == 20

    def test_denominator_shrinks_on_exclusion(self):
        dims = vector(D31=1.0)
        profile = RoleProfile("mini", "", {Dim.D31: 10, Dim.D2: 10})
        report = decision_score(dims, profile)
        assert report.score == pytest.approx(100.0)
        assert report.available_weight == 10
        assert [(e.dim, e.weight) for e in report.exclusions] == [(Dim.D2, 10)]

    def test_perfect_scores_regardless_of_exclusions(self):
        dims = vector(D31=1.0, D2=1.0, D33=1.0)
        profile = RoleProfile("mini", "", {Dim.D31: 3, Dim.D2: 7, Dim.D33: 5, Dim.D21: 9})
        assert decision_score(dims, profile).score == pytest.approx(100.0)

    def test_no_available_dimensions(self):
        profile = RoleProfile("mini", "", {Dim.D28: 10, Dim.D29: 10})
        with pytest.raises(NoAvailableDimensions):
            decision_score(vector(D31=1.0), profile)

    def test_cip_run_under_researcher_excludes_location_dims(self):
        run = make_run([
            make_task(TaskType.TRUE_POSITIVE, detected=True, cwe_match=1),
            make_task(TaskType.TRUE_POSITIVE, detected=False),
            make_task(TaskType.POST_PATCH, detected=True),
            make_task(TaskType.POST_PATCH, detected=False),
        ], layer=Layer.CIP)
        report = decision_score(compute_all(run), RESEARCHER)
        excluded = {e.dim: (e.weight, e.reason.kind) for e in report.exclusions}
        assert excluded[Dim.D7] == (10, "layer_cip")
        assert excluded[Dim.D8] == (3, "layer_cip")
        layer_excluded = {d for d, (_, kind) in excluded.items() if kind == "layer_cip"}
        assert layer_excluded == {Dim.D7, Dim.D8}

    def test_internal_consistency(self):
        dims = vector(D1=0.2, D2=0.9, D31=0.7, D21=30.0)
        profile = RoleProfile("mini", "", {Dim.D1: 8, Dim.D2: 5, Dim.D31: 4, Dim.D21: 3})
        report = decision_score(dims, profile)
        total = sum(c.weighted for c in report.contributions)
        assert 100.0 * total / report.available_weight == pytest.approx(report.score, abs=1e-9)
        assert report.available_weight + sum(e.weight for e in report.exclusions) == \
            sum(profile.weights.values())

    def test_category_subtotals_scored(self):
        dims = vector(D2=0.5, D3=1.0, D31=0.8)
        profile = RoleProfile("mini", "", {Dim.D2: 4, Dim.D3: 4, Dim.D31: 2})
        report = decision_score(dims, profile)
        detection = report.category_subtotals_scored[Category.DETECTION]
        assert detection.weight == 8
        assert detection.score == pytest.approx(0.75)
        robustness = report.category_subtotals_scored[Category.ROBUSTNESS]
        assert robustness.weight == 2
        assert robustness.score == pytest.approx(0.8)


class TestScoreProperties:
    def test_exclusion_invariance_under_fuzzing(self):
        rng = SplitMix64(7)
        profile = RoleProfile("mini", "", {Dim.D2: 10, Dim.D28: 6, Dim.D7: 4})
        base = None
        for _ in range(50):
            # D28/D7 unavailable; stuff arbitrary raws into other slots too
            dims = vector(D2=0.25, D3=rng.random(), D31=rng.random())
            score = decision_score(dims, profile).score
            if base is None:
                base = score
            assert score == base

    def test_scale_free_in_weights(self):
        dims = vector(D1=0.1, D2=0.8, D3=0.6, D31=0.9, D21=40.0)
        weights = {Dim.D1: 7, Dim.D2: 6, Dim.D3: 4, Dim.D31: 2, Dim.D21: 1}
        base = decision_score(dims, RoleProfile("w1", "", weights)).score
        for k in (2, 3, 5, 11):
            scaled = {d: w * k for d, w in weights.items()}
            score = decision_score(dims, RoleProfile(f"w{k}", "", scaled)).score
            assert score == pytest.approx(base, abs=1e-9)

    def test_monotone_in_any_available_dim(self):
        profile = RoleProfile("mini", "", {Dim.D2: 10, Dim.D3: 5, Dim.D31: 5})
        low = decision_score(vector(D2=0.3, D3=0.5, D31=0.5), profile).score
        high = decision_score(vector(D2=0.4, D3=0.5, D31=0.5), profile).score
        assert high >= low

    def test_score_bounds(self):
        rng = SplitMix64(13)
        for _ in range(200):
            dims = vector(
                D1=rng.uniform(-1, 1), D2=rng.random(), D21=rng.uniform(0, 300),
                D23=rng.uniform(0, 100_000),
            )
            profile = RoleProfile("r", "", {
                Dim.D1: rng.randint(1, 12), Dim.D2: rng.randint(1, 12),
                Dim.D21: rng.randint(1, 12), Dim.D23: rng.randint(1, 12),
            })
            score = decision_score(dims, profile).score
            assert 0.0 <= score <= 100.0


class TestReportSerialization:
    def test_json_shape(self):
        dims = vector(D2=0.5, D31=1.0)
        profile = RoleProfile("mini", "", {Dim.D2: 10, Dim.D31: 10, Dim.D7: 5})
        doc = decision_score(dims, profile).to_dict()
        assert doc["run_id"] == "r"
        assert doc["profile_name"] == "mini"
        assert doc["available_weight"] == 20
        assert doc["contributions"][0] == {
            "id": "D2", "weight": 10, "score": 0.5, "weighted": 5.0}
        assert doc["exclusions"] == [{"id": "D7", "weight": 5, "reason": "degenerate: unset"}]
        assert "Detection" in doc["category_subtotals_scored"]
