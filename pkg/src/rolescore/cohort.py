"""Multi-run analytics: leaderboards, role divergence, and weight-impact ranking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .dimensions import Dim, DimensionVector, compute_all, per_group_f1
from .errors import DegenerateInput, ValidationFailure
from .normalize import CapTable, normalize
from .profiles import RoleProfile
from .results import RunRecord, TaskType
from .scoring import DecisionReport


class EmptyCohort(DegenerateInput):
    def __init__(self) -> None:
        super().__init__("cohort contains no runs")


class TooFewProfiles(DegenerateInput):
    def __init__(self, count: int):
        super().__init__(f"divergence needs at least 2 role scores, got {count}")


class MixedLayers(ValidationFailure):
    def __init__(self, layers: Iterable[str]):
        super().__init__(
            "leaderboard requires a uniform layer, got " + ", ".join(sorted(set(layers))))


def benchmark_pct(run: RunRecord) -> float:
    """Upstream-style aggregate score: earned points over maximum points.

    True-positive tasks are worth up to 3 points (verdict, CWE, location);
    post_patch tasks 1 point for a correct clear. Points beyond the verdict
    require the task to have been detected.
    """
    earned = 0
    maximum = 0
    for task in run.tasks:
        if task.task_type is TaskType.TRUE_POSITIVE:
            maximum += 3
            if task.detected:
                earned += 1
                if task.cwe_match == 1:
                    earned += 1
                if task.location_match == 1:
                    earned += 1
        elif task.task_type is TaskType.POST_PATCH:
            maximum += 1
            if not task.detected:
                earned += 1
    if maximum == 0:
        return 0.0
    return 100.0 * earned / maximum


@dataclass(frozen=True)
class CohortEntry:
    run: RunRecord
    dims: DimensionVector


@dataclass
class Cohort:
    """Immutable collection of runs with their precomputed dimension vectors."""

    entries: list[CohortEntry] = field(default_factory=list)

    @classmethod
    def from_runs(cls, runs: Iterable[RunRecord]) -> "Cohort":
        entries = []
        seen: set[str] = set()
        for run in runs:
            if run.run_id in seen:
                raise ValidationFailure(f"duplicate run_id '{run.run_id}' in cohort")
            seen.add(run.run_id)
            entries.append(CohortEntry(run=run, dims=compute_all(run)))
        return cls(entries=entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class RdiResult:
    run_id: str
    rdi: float
    best_role: tuple[str, float]
    worst_role: tuple[str, float]

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "rdi": self.rdi,
            "best_role": {"name": self.best_role[0], "score": self.best_role[1]},
            "worst_role": {"name": self.worst_role[0], "score": self.worst_role[1]},
        }


def rdi(run_id: str, role_scores: Mapping[str, float]) -> RdiResult:
    """Spread between the most and least favorable role for one run.

    Ties on the extremes resolve to the lexicographically smallest role
    name, keeping the result deterministic.
    """
    if len(role_scores) < 2:
        raise TooFewProfiles(len(role_scores))
    best = max(sorted(role_scores), key=lambda name: (role_scores[name], ))
    worst = min(sorted(role_scores), key=lambda name: (role_scores[name], ))
    return RdiResult(
        run_id=run_id,
        rdi=role_scores[best] - role_scores[worst],
        best_role=(best, role_scores[best]),
        worst_role=(worst, role_scores[worst]),
    )


def rdi_from_reports(reports: Mapping[str, DecisionReport]) -> RdiResult:
    run_ids = {r.run_id for r in reports.values()}
    if len(run_ids) != 1:
        raise ValidationFailure("divergence expects reports for exactly one run")
    return rdi(run_ids.pop(), {name: r.score for name, r in reports.items()})


@dataclass(frozen=True)
class ImpactEntry:
    dim: Dim
    weight: int
    variance: float

    @property
    def impact(self) -> float:
        return self.weight * self.variance


@dataclass(frozen=True)
class ImpactResult:
    profile_name: str
    entries: tuple[ImpactEntry, ...]          # sorted by impact, descending
    skipped: tuple[tuple[Dim, str], ...]      # dims available in < 2 runs

    def to_dict(self) -> dict:
        return {
            "profile_name": self.profile_name,
            "entries": [
                {"id": e.dim.value, "weight": e.weight, "variance": e.variance,
                 "impact": e.impact}
                for e in self.entries
            ],
            "skipped": [
                {"id": dim.value, "note": note} for dim, note in self.skipped
            ],
        }


def impact(
    cohort: Cohort,
    profile: RoleProfile,
    caps: CapTable | None = None,
    variance: str = "population",
) -> ImpactResult:
    """Weight times cross-run variance, per selected dimension.

    The cohort is treated as the whole population of evaluated runs, so
    population variance is the default; pass variance="sample" for the
    n-1 estimator. Variance is taken over the runs where the dimension is
    available; dimensions available in fewer than two runs are skipped
    with a note rather than imputed.
    """
    if variance not in ("population", "sample"):
        raise ValidationFailure(f"unknown variance mode {variance!r}")
    if not cohort.entries:
        raise EmptyCohort()
    caps = caps or CapTable.default()
    entries: list[ImpactEntry] = []
    skipped: list[tuple[Dim, str]] = []
    for dim in sorted(profile.weights, key=lambda d: d.index):
        scores = []
        for entry in cohort.entries:
            scored = normalize(entry.dims[dim], caps)
            if scored.available:
                scores.append(scored.score)
        if len(scores) < 2:
            skipped.append((dim, f"available in {len(scores)} of {len(cohort)} runs"))
            continue
        mean = sum(scores) / len(scores)
        divisor = len(scores) if variance == "population" else len(scores) - 1
        spread = sum((s - mean) ** 2 for s in scores) / divisor
        entries.append(ImpactEntry(dim=dim, weight=profile.weights[dim], variance=spread))
    entries.sort(key=lambda e: (-e.impact, e.dim.index))
    return ImpactResult(profile.name, tuple(entries), tuple(skipped))


@dataclass(frozen=True)
class LeaderboardRow:
    run_id: str
    model_name: str
    value: float

    def to_dict(self) -> dict:
        return {"run_id": self.run_id, "model_name": self.model_name, "value": self.value}


def leaderboard(
    cohort: Cohort,
    metric: str = "benchmark_pct",
    profile: RoleProfile | None = None,
    caps: CapTable | None = None,
) -> list[LeaderboardRow]:
    """Runs ranked descending by the chosen metric; run_id breaks ties.

    ``metric`` is "benchmark_pct" or "decision_score" (the latter requires
    a profile). All runs must share a layer.
    """
    if not cohort.entries:
        raise EmptyCohort()
    layers = {entry.run.layer.value for entry in cohort.entries}
    if len(layers) > 1:
        raise MixedLayers(layers)

    rows: list[LeaderboardRow] = []
    if metric == "benchmark_pct":
        for entry in cohort.entries:
            rows.append(LeaderboardRow(entry.run.run_id, entry.run.model_name,
                                       benchmark_pct(entry.run)))
    elif metric == "decision_score":
        if profile is None:
            raise ValidationFailure("decision_score leaderboard requires a profile")
        from .scoring import decision_score
        for entry in cohort.entries:
            report = decision_score(entry.dims, profile, caps)
            rows.append(LeaderboardRow(entry.run.run_id, entry.run.model_name, report.score))
    else:
        raise ValidationFailure(f"unknown leaderboard metric {metric!r}")
    rows.sort(key=lambda r: (-r.value, r.run_id))
    return rows


def category_leaders(cohort: Cohort) -> dict[str, list[tuple[str, float]]]:
    """Per vulnerability category, runs ranked by that category's F1.

    Categories absent from every run are omitted; a run missing a category
    is omitted from that category's ranking rather than scored 0.
    """
    if not cohort.entries:
        raise EmptyCohort()
    table: dict[str, list[tuple[str, float]]] = {}
    for entry in cohort.entries:
        for category, f1 in per_group_f1(entry.run, "category").items():
            table.setdefault(category, []).append((entry.run.run_id, f1))
    for rankings in table.values():
        rankings.sort(key=lambda pair: (-pair[1], pair[0]))
    return dict(sorted(table.items()))
