"""Deterministic synthetic run generation for fixtures and property tests.

Runs are produced by a splitmix64 stream seeded from the spec, so identical
(spec, seed) pairs serialize byte-identically, on any platform. Rates are
sampled per task unless ``exact`` is set, in which case verdict counts are
rounded to the nearest integer per category stratum, which lets tests pin
confusion matrices precisely (keep parse_failure_rate at 0 for that, since
a failed parse erases the sampled verdict).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from typing import Any, Sequence

from .errors import ValidationFailure
from .results import (
    Layer,
    ParseStatus,
    RunRecord,
    Severity,
    TaskResult,
    TaskType,
    Verdict,
    interval_iou,
)

MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 PRNG: 64-bit integer semantics, trivially portable."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def chance(self, p: float) -> bool:
        return self.random() < p

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]; modulo bias is irrelevant at these ranges."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, seq: Sequence[Any]) -> Any:
        return seq[self.randint(0, len(seq) - 1)]

    def weighted_choice(self, items: Sequence[Any], weights: Sequence[float]) -> Any:
        total = sum(weights)
        mark = self.random() * total
        acc = 0.0
        for item, weight in zip(items, weights):
            acc += weight
            if mark < acc:
                return item
        return items[-1]


class InvalidSpec(ValidationFailure):
    pass


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


@dataclass(frozen=True)
class CategoryMix:
    """Task counts and outcome rates for one vulnerability category."""

    tp: int
    post_patch: int
    sast_fp: int = 0
    detection_rate: float = 0.6
    false_positive_rate: float = 0.2
    cwe_rate: float = 0.7
    location_rate: float = 0.5
    sast_fp_clear_rate: float = 0.7

    def validate(self, name: str) -> None:
        for count_field in ("tp", "post_patch", "sast_fp"):
            if getattr(self, count_field) < 0:
                raise InvalidSpec(f"{name}.{count_field} is negative")
        for rate_field in ("detection_rate", "false_positive_rate", "cwe_rate",
                           "location_rate", "sast_fp_clear_rate"):
            rate = getattr(self, rate_field)
            if not 0.0 <= rate <= 1.0:
                raise InvalidSpec(f"{name}.{rate_field} = {rate} outside [0, 1]")


@dataclass(frozen=True)
class SynthSpec:
    seed: int
    run_id: str
    model_name: str
    layer: Layer
    categories: dict[str, CategoryMix]
    languages: tuple[str, ...] = ("python",)
    severity_mix: dict[Severity, float] = field(default_factory=dict)
    parse_failure_rate: float = 0.0
    parse_partial_rate: float = 0.0
    error_rate: float = 0.0
    reasoning_rate: float = 1.0
    evidence_rate: float = 0.6
    cost_tracked: bool = True
    cost_range: tuple[float, float] = (0.001, 0.05)
    time_range: tuple[float, float] = (1.0, 30.0)
    token_range: tuple[int, int] = (300, 5000)
    tool_calls_range: tuple[int, int] = (1, 12)
    turns_range: tuple[int, int] = (1, 8)
    relevant_rate: float = 0.7
    iou_threshold: float = 0.5
    exact: bool = False

    def __post_init__(self) -> None:
        # Tolerate plain strings from hand-written specs.
        if not isinstance(self.layer, Layer):
            object.__setattr__(self, "layer", Layer(self.layer))
        if any(not isinstance(k, Severity) for k in self.severity_mix):
            object.__setattr__(self, "severity_mix", {
                Severity(k): float(v) for k, v in self.severity_mix.items()
            })
        if not isinstance(self.languages, tuple):
            object.__setattr__(self, "languages", tuple(self.languages))

    def validate(self) -> None:
        if not self.categories:
            raise InvalidSpec("spec declares no categories")
        total = 0
        for name, mix in self.categories.items():
            mix.validate(name)
            total += mix.tp + mix.post_patch + mix.sast_fp
        if total == 0:
            raise InvalidSpec("spec declares zero tasks")
        if not self.languages:
            raise InvalidSpec("spec declares no languages")
        for rate_field in ("parse_failure_rate", "parse_partial_rate", "error_rate",
                           "reasoning_rate", "evidence_rate", "relevant_rate"):
            rate = getattr(self, rate_field)
            if not 0.0 <= rate <= 1.0:
                raise InvalidSpec(f"{rate_field} = {rate} outside [0, 1]")
        if self.parse_failure_rate + self.parse_partial_rate > 1.0:
            raise InvalidSpec("parse failure + partial rates exceed 1")
        if not 0.0 < self.iou_threshold <= 1.0:
            raise InvalidSpec("iou_threshold outside (0, 1]")
        for range_field in ("cost_range", "time_range", "token_range",
                            "tool_calls_range", "turns_range"):
            lo, hi = getattr(self, range_field)
            if lo > hi or lo < 0:
                raise InvalidSpec(f"{range_field} [{lo}, {hi}] is not a valid range")
        for severity, weight in self.severity_mix.items():
            if weight < 0:
                raise InvalidSpec(f"severity weight for {severity.value} is negative")

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "SynthSpec":
        doc = dict(doc)
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise InvalidSpec(f"unknown spec keys: {', '.join(sorted(unknown))}")
        try:
            doc["layer"] = Layer(doc.get("layer", "CIP"))
        except ValueError:
            raise InvalidSpec(f"invalid layer {doc.get('layer')!r}") from None
        categories = {}
        for name, mix in dict(doc.get("categories", {})).items():
            if not isinstance(mix, dict):
                raise InvalidSpec(f"category {name!r} must be a mapping")
            try:
                categories[name] = CategoryMix(**mix)
            except TypeError as exc:
                raise InvalidSpec(f"category {name!r}: {exc}") from None
        doc["categories"] = categories
        if "severity_mix" in doc:
            try:
                doc["severity_mix"] = {
                    Severity(k): float(v) for k, v in dict(doc["severity_mix"]).items()
                }
            except ValueError as exc:
                raise InvalidSpec(f"severity_mix: {exc}") from None
        if "languages" in doc:
            doc["languages"] = tuple(doc["languages"])
        for range_field in ("cost_range", "time_range", "token_range",
                            "tool_calls_range", "turns_range"):
            if range_field in doc:
                doc[range_field] = tuple(doc[range_field])
        try:
            spec = cls(**doc)
        except TypeError as exc:
            raise InvalidSpec(str(exc)) from None
        spec.validate()
        return spec

    @classmethod
    def load(cls, path: str) -> "SynthSpec":
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidSpec(f"bad spec JSON: {exc.msg}") from None
        if not isinstance(doc, dict):
            raise InvalidSpec("spec file must hold a JSON object")
        return cls.from_dict(doc)


def _slug(name: str) -> str:
    return "".join(ch if ch.isalnum() else "-" for ch in name.lower()).strip("-")


def _verdict_flags(rng: SplitMix64, count: int, rate: float, exact: bool) -> list[bool]:
    if exact:
        hits = _round_half_up(count * rate)
        return [i < hits for i in range(count)]
    return [rng.chance(rate) for _ in range(count)]


def generate(spec: SynthSpec) -> RunRecord:
    """Produce a deterministic pseudo-random run matching the spec's shape."""
    spec.validate()
    rng = SplitMix64(spec.seed)
    tasks: list[TaskResult] = []

    severities = sorted(spec.severity_mix, key=lambda s: s.value)
    severity_weights = [spec.severity_mix[s] for s in severities]
    if severities and sum(severity_weights) <= 0:
        severities = []

    for name in sorted(spec.categories):
        mix = spec.categories[name]
        slug = _slug(name)
        tp_flags = _verdict_flags(rng, mix.tp, mix.detection_rate, spec.exact)
        cwe_flags = _verdict_flags(rng, sum(tp_flags), mix.cwe_rate, spec.exact)
        loc_flags = _verdict_flags(rng, sum(tp_flags), mix.location_rate, spec.exact)
        fp_flags = _verdict_flags(rng, mix.post_patch, mix.false_positive_rate, spec.exact)
        clear_flags = _verdict_flags(rng, mix.sast_fp, mix.sast_fp_clear_rate, spec.exact)

        detected_seen = 0
        for i in range(mix.tp):
            flagged = tp_flags[i]
            cwe_hit = loc_hit = None
            if flagged:
                cwe_hit = 1 if cwe_flags[detected_seen] else 0
                loc_hit = 1 if loc_flags[detected_seen] else 0
                detected_seen += 1
            tasks.append(_make_task(
                spec, rng, task_id=f"{slug}-tp-{i:03d}", task_type=TaskType.TRUE_POSITIVE,
                category=name, flagged=flagged, cwe_hit=cwe_hit, loc_hit=loc_hit,
                severities=severities, severity_weights=severity_weights,
            ))
        for i in range(mix.post_patch):
            tasks.append(_make_task(
                spec, rng, task_id=f"{slug}-pp-{i:03d}", task_type=TaskType.POST_PATCH,
                category=name, flagged=fp_flags[i], cwe_hit=None, loc_hit=None,
                severities=[], severity_weights=[],
            ))
        for i in range(mix.sast_fp):
            tasks.append(_make_task(
                spec, rng, task_id=f"{slug}-sf-{i:03d}", task_type=TaskType.SAST_FP,
                category=name, flagged=not clear_flags[i], cwe_hit=None, loc_hit=None,
                severities=[], severity_weights=[],
            ))

    return RunRecord(
        run_id=spec.run_id, model_name=spec.model_name, layer=spec.layer,
        tasks=tuple(tasks),
    )


def _make_task(
    spec: SynthSpec,
    rng: SplitMix64,
    task_id: str,
    task_type: TaskType,
    category: str,
    flagged: bool,
    cwe_hit: int | None,
    loc_hit: int | None,
    severities: list[Severity],
    severity_weights: list[float],
) -> TaskResult:
    language = rng.choice(spec.languages)
    severity = None
    if task_type is TaskType.TRUE_POSITIVE and severities:
        severity = rng.weighted_choice(severities, severity_weights)

    mark = rng.random()
    if mark < spec.parse_failure_rate:
        parse_status = ParseStatus.FAILED
    elif mark < spec.parse_failure_rate + spec.parse_partial_rate:
        parse_status = ParseStatus.PARTIAL
    else:
        parse_status = ParseStatus.FULL

    verdict: Verdict | None
    if parse_status is ParseStatus.FAILED:
        verdict = None
        cwe_hit = loc_hit = None
    else:
        verdict = Verdict.VULNERABLE if flagged else Verdict.NOT_VULNERABLE

    predicted_range = truth_range = None
    iou = None
    if spec.layer is Layer.TU and verdict is Verdict.VULNERABLE \
            and task_type is TaskType.TRUE_POSITIVE:
        truth_len = rng.randint(3, 12)
        start = rng.randint(1, 400)
        truth_range = (start, start + truth_len - 1)
        # Overlap of k lines gives IoU k / (2L - k); pick k on the right side
        # of the match threshold.
        k_min_hit = math.ceil(2 * truth_len * spec.iou_threshold / (1 + spec.iou_threshold))
        k_min_hit = min(max(k_min_hit, 1), truth_len)
        if loc_hit == 1:
            k = rng.randint(k_min_hit, truth_len)
        else:
            k = rng.randint(0, max(k_min_hit - 1, 0))
        if k == 0:
            predicted_range = (truth_range[1] + 2, truth_range[1] + 2 + truth_len - 1)
        else:
            shift = truth_len - k
            predicted_range = (truth_range[0] + shift, truth_range[1] + shift)
        iou = interval_iou(predicted_range, truth_range)
        loc_hit = 1 if iou >= spec.iou_threshold else 0
    elif spec.layer is Layer.CIP:
        loc_hit = None

    reasoning = rng.chance(spec.reasoning_rate)
    evidence = flagged and rng.chance(spec.evidence_rate)

    tool_calls = tool_calls_relevant = turns = None
    if spec.layer is Layer.TU:
        tool_calls = rng.randint(*spec.tool_calls_range)
        tool_calls_relevant = sum(
            1 for _ in range(tool_calls) if rng.chance(spec.relevant_rate))
        turns = rng.randint(*spec.turns_range)

    cost = round(rng.uniform(*spec.cost_range), 6) if spec.cost_tracked else None

    return TaskResult(
        task_id=task_id,
        task_type=task_type,
        task_category=category,
        task_language=language,
        task_severity=severity,
        predicted_verdict=verdict,
        cwe_match=cwe_hit if task_type is TaskType.TRUE_POSITIVE else None,
        location_match=loc_hit,
        location_iou=iou,
        predicted_line_range=predicted_range,
        truth_line_range=truth_range,
        reasoning_present=reasoning,
        evidence_source=evidence,
        evidence_sink=evidence,
        evidence_flow=evidence,
        parse_status=parse_status,
        errored=rng.chance(spec.error_rate),
        cost_usd=cost,
        total_tokens=rng.randint(*spec.token_range),
        wall_time_s=round(rng.uniform(*spec.time_range), 3),
        tool_calls=tool_calls,
        tool_calls_relevant=tool_calls_relevant,
        turns=turns,
    )
