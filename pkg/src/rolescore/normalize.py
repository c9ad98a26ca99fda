"""Maps raw dimension values into [0, 1] under four strategies.

Cost/time/token/tool dimensions normalize against fixed reference caps, so
a run's normalized scores never depend on which other runs are loaded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .dimensions import Dim, DimensionValue, DimensionVector, Strategy, Unavailable
from .errors import ValidationFailure

DEFAULT_CAPS: dict[Dim, float] = {
    Dim.D18: 0.50,    # USD per task
    Dim.D19: 2.00,    # USD per detected true positive
    Dim.D20: 100.0,   # MCC per USD
    Dim.D21: 120.0,   # seconds per task
    Dim.D22: 60.0,    # tasks per minute
    Dim.D23: 50_000,  # tokens per task
    Dim.D24: 30,      # tool calls per task
    Dim.D25: 20,      # turns per task
}


class MissingCap(ValidationFailure):
    def __init__(self, dim: Dim):
        self.dim = dim
        super().__init__(f"no cap configured for {dim.value}")


class BadCapTable(ValidationFailure):
    pass


@dataclass(frozen=True)
class CapTable:
    caps: Mapping[Dim, float]

    def __post_init__(self) -> None:
        for dim, cap in self.caps.items():
            if dim not in DEFAULT_CAPS:
                raise BadCapTable(f"{dim.value} is not a capped dimension")
            if not cap > 0:
                raise BadCapTable(f"cap for {dim.value} must be positive, got {cap}")

    def __getitem__(self, dim: Dim) -> float:
        try:
            return self.caps[dim]
        except KeyError:
            raise MissingCap(dim) from None

    @classmethod
    def default(cls) -> "CapTable":
        return cls(dict(DEFAULT_CAPS))

    @classmethod
    def with_overrides(cls, overrides: Mapping[str, Any]) -> "CapTable":
        """Default caps patched by a {"D18": 0.5, ...} mapping. Unknown keys rejected."""
        caps = dict(DEFAULT_CAPS)
        for key, value in overrides.items():
            try:
                dim = Dim(key)
            except ValueError:
                raise BadCapTable(f"unknown cap key {key!r}") from None
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise BadCapTable(f"cap for {key} must be a number")
            caps[dim] = float(value)
        return cls(caps)

    @classmethod
    def load(cls, path: str) -> "CapTable":
        with open(path, encoding="utf-8") as fh:
            overrides = json.load(fh)
        if not isinstance(overrides, dict):
            raise BadCapTable("caps file must hold a JSON object")
        return cls.with_overrides(overrides)


@dataclass(frozen=True)
class ScoredDimension:
    """A dimension value with its normalized score attached."""

    dim: Dim
    raw: float | None
    score: float | None
    reason: Unavailable | None = None
    note: str | None = None

    @property
    def available(self) -> bool:
        return self.reason is None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"id": self.dim.value}
        if self.available:
            out["status"] = "available"
            out["raw"] = self.raw
            out["score"] = self.score
            if self.note is not None:
                out["note"] = self.note
        else:
            out["status"] = "unavailable"
            out["reason"] = str(self.reason)
        return out


def _clamp(value: float, lo: float = 0.0, hi: float = 1.0) -> float:
    return max(lo, min(hi, value))


def normalize(value: DimensionValue, caps: CapTable) -> ScoredDimension:
    """Normalize one dimension value; unavailable values pass through."""
    if not value.available:
        return ScoredDimension(value.dim, raw=None, score=None, reason=value.reason)

    raw = value.raw
    assert raw is not None
    strategy = value.dim.strategy
    if strategy is Strategy.RATIO:
        score = _clamp(raw)
    elif strategy is Strategy.MCC:
        score = _clamp((raw + 1.0) / 2.0)
    elif strategy is Strategy.LOWER_IS_BETTER:
        score = 1.0 - min(raw / caps[value.dim], 1.0)
    else:  # HIGHER_IS_BETTER; clamp below too, a negative MCC/$ should floor at 0
        score = _clamp(min(raw / caps[value.dim], 1.0))
    return ScoredDimension(value.dim, raw=raw, score=score, note=value.note)


def normalize_vector(vector: DimensionVector, caps: CapTable | None = None) -> list[ScoredDimension]:
    caps = caps or CapTable.default()
    return [normalize(value, caps) for value in vector]


def scored_map(values: Iterable[ScoredDimension]) -> dict[Dim, ScoredDimension]:
    return {v.dim: v for v in values}
