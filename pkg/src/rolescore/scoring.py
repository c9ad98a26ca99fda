"""Composite Decision Score with dynamic exclusion, grading, and the report."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .dimensions import Category, Dim, DimensionVector, Unavailable
from .errors import DegenerateInput, ValidationFailure
from .normalize import CapTable, normalize
from .profiles import RoleProfile

GRADE_THRESHOLDS = (("A", 75.0), ("B", 60.0), ("C", 50.0), ("D", 40.0))


class NoAvailableDimensions(DegenerateInput):
    def __init__(self, run_id: str, profile_name: str):
        self.run_id = run_id
        self.profile_name = profile_name
        super().__init__(
            f"every dimension selected by '{profile_name}' is unavailable for run '{run_id}'")


class OutOfRange(ValidationFailure):
    pass


def grade(score: float) -> str:
    """Letter grade for a 0-100 score; thresholds inclusive at the bottom."""
    if not 0.0 <= score <= 100.0:
        raise OutOfRange(f"score {score} outside [0, 100]")
    for letter, floor in GRADE_THRESHOLDS:
        if score >= floor:
            return letter
    return "F"


@dataclass(frozen=True)
class Contribution:
    dim: Dim
    weight: int
    score: float

    @property
    def weighted(self) -> float:
        return self.weight * self.score


@dataclass(frozen=True)
class Exclusion:
    dim: Dim
    weight: int
    reason: Unavailable


@dataclass(frozen=True)
class CategorySubtotal:
    weight: int
    score: float  # weighted mean of the category's available dimensions


@dataclass(frozen=True)
class DecisionReport:
    run_id: str
    profile_name: str
    score: float
    grade: str
    available_weight: int
    contributions: tuple[Contribution, ...]
    exclusions: tuple[Exclusion, ...]
    category_subtotals_scored: dict[Category, CategorySubtotal]

    def to_dict(self) -> dict[str, Any]:
        return {
            "run_id": self.run_id,
            "profile_name": self.profile_name,
            "score": self.score,
            "grade": self.grade,
            "available_weight": self.available_weight,
            "contributions": [
                {"id": c.dim.value, "weight": c.weight, "score": c.score, "weighted": c.weighted}
                for c in self.contributions
            ],
            "exclusions": [
                {"id": e.dim.value, "weight": e.weight, "reason": str(e.reason)}
                for e in self.exclusions
            ],
            "category_subtotals_scored": {
                cat.value: {"weight": sub.weight, "score": sub.score}
                for cat, sub in self.category_subtotals_scored.items()
            },
        }


def decision_score(
    dims: DimensionVector,
    profile: RoleProfile,
    caps: CapTable | None = None,
) -> DecisionReport:
    """Score one run under one profile.

    Unavailable dimensions drop out of both numerator and denominator, so
    the result always spans 0-100 over whatever evidence exists. The
    profile's weights are used as given; the weight-sum constraint is a
    profile-validity concern, not a scoring one (the formula is scale-free).
    """
    caps = caps or CapTable.default()
    contributions: list[Contribution] = []
    exclusions: list[Exclusion] = []
    for dim in sorted(profile.weights, key=lambda d: d.index):
        weight = profile.weights[dim]
        scored = normalize(dims[dim], caps)
        if scored.available:
            assert scored.score is not None
            contributions.append(Contribution(dim, weight, scored.score))
        else:
            assert scored.reason is not None
            exclusions.append(Exclusion(dim, weight, scored.reason))

    available_weight = sum(c.weight for c in contributions)
    if available_weight == 0:
        raise NoAvailableDimensions(dims.run_id, profile.name)
    score = 100.0 * sum(c.weighted for c in contributions) / available_weight

    subtotals: dict[Category, CategorySubtotal] = {}
    for category in Category:
        in_cat = [c for c in contributions if c.dim.category is category]
        if not in_cat:
            continue
        weight = sum(c.weight for c in in_cat)
        subtotals[category] = CategorySubtotal(
            weight=weight,
            score=sum(c.weighted for c in in_cat) / weight,
        )

    return DecisionReport(
        run_id=dims.run_id,
        profile_name=profile.name,
        score=score,
        grade=grade(score),
        available_weight=available_weight,
        contributions=tuple(contributions),
        exclusions=tuple(exclusions),
        category_subtotals_scored=subtotals,
    )
