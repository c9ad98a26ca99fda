"""Role weight profiles: the five built-in stakeholder lenses plus user files.

A profile selects 12-16 dimensions and assigns positive integer weights
summing to exactly 80. Profiles live in YAML ({name, description,
weights: {D1: 10, ...}}); the built-ins also ship as golden files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import yaml

from .dimensions import ALL_DIMS, Category, Dim
from .errors import ValidationFailure

WEIGHT_SUM = 80
MIN_DIMS = 12
MAX_DIMS = 16


class ProfileParseError(ValidationFailure):
    pass


class UnknownDimension(ValidationFailure):
    def __init__(self, key: str):
        self.key = key
        super().__init__(f"unknown dimension key {key!r}")


class UnknownProfile(ValidationFailure):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no profile named {name!r}")


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self) -> str:
        return self.message


class ProfileValidationError(ValidationFailure):
    def __init__(self, name: str, violations: list[Violation]):
        self.profile_name = name
        self.violations = violations
        detail = "; ".join(str(v) for v in violations)
        super().__init__(f"profile '{name}' invalid: {detail}")


@dataclass(frozen=True)
class RoleProfile:
    """A stakeholder lens: a dimension subset with integer weights.

    Construction does not validate the 12-16/sum-80 rules; call
    ``validate`` (or go through the registry / loader, which do).
    """

    name: str
    description: str
    weights: Mapping[Dim, int]

    def category_subtotals(
        self, overrides: Mapping[Dim, Category] | None = None
    ) -> dict[Category, int]:
        """Weight totals per category, all 7 categories always present.

        ``overrides`` reassigns individual dimensions to a different
        category before summing (used to reconcile alternate published
        tallies that file D5 under Coverage).
        """
        totals = {category: 0 for category in Category}
        for dim, weight in self.weights.items():
            category = overrides.get(dim, dim.category) if overrides else dim.category
            totals[category] += weight
        return totals

    def to_dict(self) -> dict[str, Any]:
        ordered = sorted(self.weights.items(), key=lambda kv: kv[0].index)
        return {
            "name": self.name,
            "description": self.description,
            "weights": {dim.value: weight for dim, weight in ordered},
        }


def validate(profile: RoleProfile) -> list[Violation]:
    """Every violated profile invariant, with the offending values."""
    violations: list[Violation] = []
    total = sum(profile.weights.values())
    if total != WEIGHT_SUM:
        violations.append(Violation("sum", f"sum {total} != {WEIGHT_SUM}"))
    count = len(profile.weights)
    if not MIN_DIMS <= count <= MAX_DIMS:
        violations.append(Violation(
            "count", f"{count} dims outside [{MIN_DIMS}, {MAX_DIMS}]"))
    for dim, weight in sorted(profile.weights.items(), key=lambda kv: kv[0].index):
        if not isinstance(weight, int) or isinstance(weight, bool) or weight < 1:
            violations.append(Violation(
                "weight", f"weight for {dim.value} must be a positive integer, got {weight!r}"))
    if not profile.name:
        violations.append(Violation("name", "profile name is empty"))
    return violations


def _weights(pairs: dict[str, int]) -> dict[Dim, int]:
    return {Dim(k): v for k, v in pairs.items()}


CISO = RoleProfile(
    name="ciso",
    description=(
        "Chief Information Security Officer: severity-aware recall, consistent "
        "category coverage, and findings that can be trusted in a security program."
    ),
    weights=_weights({
        "D1": 10, "D2": 8, "D3": 6, "D5": 2, "D6": 5, "D8": 5, "D9": 4, "D10": 6,
        "D11": 3, "D14": 4, "D18": 2, "D28": 10, "D29": 8, "D33": 3, "D34": 3, "D35": 1,
    }),
)

CAIO = RoleProfile(
    name="caio",
    description=(
        "Chief AI Officer: capability per dollar, throughput, tool-use "
        "effectiveness, and autonomous completion at scale."
    ),
    weights=_weights({
        "D1": 9, "D4": 7, "D9": 4, "D15": 1, "D18": 5, "D20": 8, "D22": 6,
        "D25": 5, "D26": 3, "D27": 7, "D30": 5, "D31": 4, "D32": 6, "D34": 10,
    }),
)

RESEARCHER = RoleProfile(
    name="researcher",
    description=(
        "Security researcher: classification accuracy, location precision, "
        "evidence chains, and reasoning quality on hits and misses alike."
    ),
    weights=_weights({
        "D1": 8, "D2": 6, "D6": 12, "D7": 10, "D8": 3, "D9": 7, "D10": 5,
        "D11": 4, "D14": 10, "D15": 2, "D16": 7, "D17": 2, "D35": 4,
    }),
)

HEAD_OF_ENGINEERING = RoleProfile(
    name="head_of_engineering",
    description=(
        "Head of Engineering: high precision, actionable findings with "
        "location, fast wall times, and low per-task cost for CI integration."
    ),
    weights=_weights({
        "D2": 5, "D3": 12, "D5": 4, "D7": 8, "D8": 10, "D12": 3, "D18": 7,
        "D21": 7, "D22": 5, "D23": 3, "D31": 7, "D32": 3, "D33": 6,
    }),
)

AI_ACTOR = RoleProfile(
    name="ai_actor",
    description=(
        "AI-as-actor: parse reliability, format compliance, autonomous "
        "completion, and stable behavior across common and rare classes."
    ),
    weights=_weights({
        "D1": 10, "D4": 7, "D9": 3, "D11": 4, "D14": 2, "D25": 5, "D26": 5,
        "D27": 8, "D31": 3, "D32": 6, "D33": 6, "D34": 12, "D35": 9,
    }),
)

BUILTIN_PROFILES: dict[str, RoleProfile] = {
    p.name: p for p in (CISO, CAIO, RESEARCHER, HEAD_OF_ENGINEERING, AI_ACTOR)
}


def serialize_profile(profile: RoleProfile) -> str:
    """Deterministic YAML form; weights in D1..D35 order."""
    lines = [
        f"name: {profile.name}",
        f"description: {_yaml_scalar(profile.description)}",
        "weights:",
    ]
    for dim in ALL_DIMS:
        if dim in profile.weights:
            lines.append(f"  {dim.value}: {profile.weights[dim]}")
    return "\n".join(lines) + "\n"


def _yaml_scalar(text: str) -> str:
    if any(ch in text for ch in ":#{}[]\"'\n") or text != text.strip():
        return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return text


def load_profile(text: str) -> RoleProfile:
    """Parse and validate a profile document; only valid profiles return."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ProfileParseError(f"bad profile document: {exc}") from None
    if not isinstance(doc, dict):
        raise ProfileParseError("profile document must be a mapping")
    name = doc.get("name")
    description = doc.get("description", "")
    raw_weights = doc.get("weights")
    if not isinstance(name, str):
        raise ProfileParseError("missing 'name'")
    if not isinstance(raw_weights, dict):
        raise ProfileParseError("missing 'weights' mapping")

    weights: dict[Dim, int] = {}
    for key, value in raw_weights.items():
        try:
            dim = Dim(str(key))
        except ValueError:
            raise UnknownDimension(str(key)) from None
        weights[dim] = value
    profile = RoleProfile(name=name, description=str(description or ""), weights=weights)
    violations = validate(profile)
    if violations:
        raise ProfileValidationError(name, violations)
    return profile


def load_profile_file(path: str) -> RoleProfile:
    with open(path, encoding="utf-8") as fh:
        return load_profile(fh.read())


@dataclass
class ProfileRegistry:
    """Case-insensitive name -> profile lookup, built-ins included by default."""

    profiles: dict[str, RoleProfile] = field(default_factory=dict)
    _builtin_keys: frozenset[str] = field(default=frozenset(), repr=False)

    @classmethod
    def with_builtins(cls) -> "ProfileRegistry":
        registry = cls()
        for profile in BUILTIN_PROFILES.values():
            registry.profiles[profile.name.lower()] = profile
        registry._builtin_keys = frozenset(registry.profiles)
        return registry

    def add(self, profile: RoleProfile, override: bool = False) -> None:
        violations = validate(profile)
        if violations:
            raise ProfileValidationError(profile.name, violations)
        key = profile.name.lower()
        if key in self.profiles and not override:
            kind = "built-in" if key in self._builtin_keys else "registered"
            raise ValidationFailure(
                f"profile '{profile.name}' already {kind}; pass override to replace")
        self.profiles[key] = profile

    def get(self, name: str) -> RoleProfile:
        try:
            return self.profiles[name.lower()]
        except KeyError:
            raise UnknownProfile(name) from None

    def names(self) -> list[str]:
        return sorted(self.profiles)
