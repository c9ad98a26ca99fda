from __future__ import annotations

import inspect
import json

import pytest

from rolescore.dimensions import ALL_DIMS, Dim, DimensionValue, Strategy, Unavailable
from rolescore.normalize import (
    DEFAULT_CAPS,
    BadCapTable,
    CapTable,
    MissingCap,
    normalize,
)

CAPS = CapTable.default()


def value(dim: Dim, raw: float) -> DimensionValue:
    return DimensionValue(dim, raw=raw)


class TestStrategies:
    def test_mcc_endpoints(self):
        assert normalize(value(Dim.D1, -1.0), CAPS).score == pytest.approx(0.0, abs=1e-12)
        assert normalize(value(Dim.D1, 0.0), CAPS).score == pytest.approx(0.5, abs=1e-12)
        assert normalize(value(Dim.D1, 1.0), CAPS).score == pytest.approx(1.0, abs=1e-12)

    def test_ratio_clamps(self):
        assert normalize(value(Dim.D2, 0.4), CAPS).score == pytest.approx(0.4)
        assert normalize(value(Dim.D2, -0.1), CAPS).score == 0.0
        assert normalize(value(Dim.D2, 1.2), CAPS).score == 1.0

    def test_lower_is_better_boundaries(self):
        assert normalize(value(Dim.D21, 120.0), CAPS).score == pytest.approx(0.0, abs=1e-12)
        assert normalize(value(Dim.D21, 0.0), CAPS).score == pytest.approx(1.0, abs=1e-12)
        assert normalize(value(Dim.D21, 60.0), CAPS).score == pytest.approx(0.5, abs=1e-12)

    def test_throughput_fraction_of_cap(self):
        assert normalize(value(Dim.D22, 15.1), CAPS).score == pytest.approx(15.1 / 60, abs=1e-12)

    def test_negative_quality_per_dollar_floors_at_zero(self):
        assert normalize(value(Dim.D20, -0.02), CAPS).score == 0.0

    def test_saturation_beyond_caps(self):
        for multiple in (1.0, 1.5, 2.0, 10.0):
            assert normalize(value(Dim.D18, 0.5 * multiple), CAPS).score == 0.0
            assert normalize(value(Dim.D22, 60.0 * multiple), CAPS).score == 1.0

    def test_unavailable_passes_through(self):
        v = DimensionValue(Dim.D18, reason=Unavailable("no_cost"))
        scored = normalize(v, CAPS)
        assert not scored.available
        assert scored.score is None
        assert str(scored.reason) == "no_cost"

    def test_note_survives(self):
        scored = normalize(DimensionValue(Dim.D3, raw=0.0, note="zero denominator"), CAPS)
        assert scored.note == "zero denominator"


class TestMonotonicity:
    def test_lower_is_better_non_increasing(self):
        scores = [normalize(value(Dim.D23, raw), CAPS).score
                  for raw in (0, 10_000, 25_000, 50_000, 80_000)]
        assert scores == sorted(scores, reverse=True)

    def test_higher_is_better_non_decreasing(self):
        scores = [normalize(value(Dim.D22, raw), CAPS).score
                  for raw in (0, 10, 30, 60, 90)]
        assert scores == sorted(scores)

    def test_mcc_strictly_increasing(self):
        raws = [-1.0, -0.5, 0.0, 0.3, 0.9, 1.0]
        scores = [normalize(value(Dim.D1, raw), CAPS).score for raw in raws]
        assert all(a < b for a, b in zip(scores, scores[1:]))

    def test_all_scores_in_unit_interval(self):
        # Raw domains differ: MCC lives in [-1, 1]; lower-is-better raws are
        # nonnegative quantities by schema; higher-is-better may go negative
        # (MCC per dollar); ratios may drift either way.
        for dim in ALL_DIMS:
            if dim.strategy is Strategy.MCC:
                raws = (-1.0, -0.3, 0.0, 0.7, 1.0)
            elif dim.strategy is Strategy.LOWER_IS_BETTER:
                raws = (0.0, 0.3, 1.0, 5.0, 1e6)
            else:
                raws = (-2.0, 0.0, 0.3, 1.0, 5.0, 1e6)
            for raw in raws:
                score = normalize(value(dim, raw), CAPS).score
                assert 0.0 <= score <= 1.0, (dim, raw)


class TestCohortIndependence:
    def test_signature_admits_no_cohort(self):
        # Normalization can only see one value and the cap table; there is
        # no argument through which other runs could leak in.
        params = list(inspect.signature(normalize).parameters)
        assert params == ["value", "caps"]


class TestCapTable:
    def test_default_caps(self):
        assert CAPS[Dim.D18] == 0.50
        assert CAPS[Dim.D19] == 2.00
        assert CAPS[Dim.D20] == 100.0
        assert CAPS[Dim.D21] == 120.0
        assert CAPS[Dim.D22] == 60.0
        assert CAPS[Dim.D23] == 50_000
        assert CAPS[Dim.D24] == 30
        assert CAPS[Dim.D25] == 20
        assert len(DEFAULT_CAPS) == 8

    def test_missing_cap(self):
        partial = CapTable({Dim.D18: 0.5})
        with pytest.raises(MissingCap):
            normalize(value(Dim.D21, 10.0), partial)

    def test_override_merges_onto_defaults(self):
        table = CapTable.with_overrides({"D21": 240})
        assert table[Dim.D21] == 240.0
        assert table[Dim.D18] == 0.50

    def test_unknown_keys_rejected(self):
        with pytest.raises(BadCapTable):
            CapTable.with_overrides({"D99": 1.0})
        with pytest.raises(BadCapTable):
            CapTable.with_overrides({"D1": 1.0})  # D1 takes no cap

    def test_nonpositive_cap_rejected(self):
        with pytest.raises(BadCapTable):
            CapTable.with_overrides({"D21": 0})

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "caps.json"
        path.write_text(json.dumps({"D18": 1.0}), encoding="utf-8")
        assert CapTable.load(str(path))[Dim.D18] == 1.0

    def test_capped_set_is_exactly_eight(self):
        capped = {d for d in ALL_DIMS
                  if d.strategy in (Strategy.LOWER_IS_BETTER, Strategy.HIGHER_IS_BETTER)}
        assert capped == set(DEFAULT_CAPS)
