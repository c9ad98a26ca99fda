"""HTTP API for what-if re-scoring over a fixed set of loaded runs.

Dimension vectors are computed once at startup and cached; requests only
re-weight and re-aggregate, so interactive editors get immediate feedback.
The store is immutable after startup and requests never mutate it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from .cohort import Cohort, CohortEntry, benchmark_pct, impact, rdi
from .dimensions import ALL_DIMS, CATEGORY_LONG_NAMES, Dim, DimensionVector, compute_all
from .errors import DegenerateInput, ValidationFailure
from .normalize import DEFAULT_CAPS, CapTable, normalize_vector
from .profiles import (
    BUILTIN_PROFILES,
    ProfileValidationError,
    RoleProfile,
    UnknownDimension,
    UnknownProfile,
    Violation,
    validate,
)
from .results import RunRecord
from .scoring import decision_score


class UnknownRun(Exception):
    def __init__(self, run_id: str):
        self.run_id = run_id
        super().__init__(f"no run named {run_id!r}")


@dataclass(frozen=True)
class LoadedRun:
    run: RunRecord
    dims: DimensionVector


@dataclass
class RunStore:
    runs: dict[str, LoadedRun] = field(default_factory=dict)
    caps: CapTable = field(default_factory=CapTable.default)
    profiles: dict[str, RoleProfile] = field(default_factory=dict)


def build_store(
    runs: list[RunRecord],
    caps: CapTable | None = None,
    extra_profiles: list[RoleProfile] | None = None,
) -> RunStore:
    store = RunStore(caps=caps or CapTable.default())
    for run in runs:
        if run.run_id in store.runs:
            raise ValidationFailure(f"duplicate run_id '{run.run_id}'")
        store.runs[run.run_id] = LoadedRun(run=run, dims=compute_all(run))
    store.profiles = dict(BUILTIN_PROFILES)
    for profile in extra_profiles or []:
        store.profiles[profile.name.lower()] = profile
    return store


class InlineProfile(BaseModel):
    name: str
    description: str = ""
    weights: dict[str, int]


class ProfileRef(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str


class WhatIfRequest(BaseModel):
    run_ids: list[str]
    profile: InlineProfile | ProfileRef
    caps: dict[str, float] | None = None
    relax_sum: bool = False


class CohortRequest(BaseModel):
    run_ids: list[str]
    profiles: list[str] | None = None
    caps: dict[str, float] | None = None


class ImpactRequest(BaseModel):
    run_ids: list[str]
    profile: InlineProfile | ProfileRef
    caps: dict[str, float] | None = None


def _error(status: int, detail: str, violations: list[dict] | None = None) -> JSONResponse:
    body: dict[str, Any] = {"detail": detail}
    if violations is not None:
        body["violations"] = violations
    return JSONResponse(status_code=status, content=body)


def _parse_inline_profile(inline: InlineProfile, relax_sum: bool) -> RoleProfile:
    weights: dict[Dim, int] = {}
    for key, value in inline.weights.items():
        try:
            dim = Dim(key)
        except ValueError:
            raise UnknownDimension(key) from None
        weights[dim] = value
    profile = RoleProfile(name=inline.name, description=inline.description, weights=weights)
    violations = validate(profile)
    if relax_sum:
        # Mid-edit profiles may carry any weight sum and any 1-35 dimension
        # subset; weights must still be positive integers on valid dims.
        violations = [v for v in violations if v.code not in ("sum", "count")]
        if not weights:
            violations.append(Violation("count", "profile selects no dimensions"))
    if violations:
        raise ProfileValidationError(inline.name, violations)
    return profile


def _resolve_profile(store: RunStore, ref: InlineProfile | ProfileRef,
                     relax_sum: bool) -> RoleProfile:
    if isinstance(ref, InlineProfile):
        return _parse_inline_profile(ref, relax_sum)
    profile = store.profiles.get(ref.name.lower())
    if profile is None:
        raise UnknownProfile(ref.name)
    return profile


def _caps_for(store: RunStore, overrides: Mapping[str, float] | None) -> CapTable:
    if not overrides:
        return store.caps
    merged = {dim.value: cap for dim, cap in store.caps.caps.items()}
    merged.update(overrides)
    return CapTable.with_overrides(merged)


def create_app(store: RunStore) -> FastAPI:
    app = FastAPI(title="rolescore", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def malformed_request(request: Request, exc: RequestValidationError):
        violations = [
            {"code": "request", "message": f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}"}
            for e in exc.errors()
        ]
        return _error(400, "invalid request body", violations)

    @app.exception_handler(ProfileValidationError)
    async def invalid_profile(request: Request, exc: ProfileValidationError):
        return _error(400, str(exc), [
            {"code": v.code, "message": v.message} for v in exc.violations
        ])

    @app.exception_handler(UnknownDimension)
    async def unknown_dimension(request: Request, exc: UnknownDimension):
        return _error(400, str(exc), [{"code": "dimension", "message": str(exc)}])

    @app.exception_handler(UnknownProfile)
    async def unknown_profile(request: Request, exc: UnknownProfile):
        return _error(404, str(exc))

    @app.exception_handler(UnknownRun)
    async def unknown_run(request: Request, exc: UnknownRun):
        return _error(404, str(exc))

    @app.exception_handler(DegenerateInput)
    async def nothing_scoreable(request: Request, exc: DegenerateInput):
        return _error(422, str(exc))

    @app.exception_handler(ValidationFailure)
    async def invalid_input(request: Request, exc: ValidationFailure):
        return _error(400, str(exc), [{"code": "input", "message": str(exc)}])

    def _entries(run_ids: list[str]) -> list[LoadedRun]:
        loaded = []
        for run_id in run_ids:
            if run_id not in store.runs:
                raise UnknownRun(run_id)
            loaded.append(store.runs[run_id])
        return loaded

    @app.get("/api/v1/runs")
    def list_runs():
        out = []
        for run_id in sorted(store.runs):
            run = store.runs[run_id].run
            out.append({
                "run_id": run.run_id,
                "model_name": run.model_name,
                "layer": run.layer.value,
                "task_count": len(run.tasks),
                "benchmark_pct": benchmark_pct(run),
                "cost_tracked": run.cost_tracked,
                "severity_present": run.severity_present,
                "has_sast_fp": run.has_sast_fp,
            })
        return out

    @app.get("/api/v1/runs/{run_id}/dimensions")
    def run_dimensions(run_id: str):
        if run_id not in store.runs:
            raise UnknownRun(run_id)
        scored = normalize_vector(store.runs[run_id].dims, store.caps)
        return {"run_id": run_id, "values": [s.to_dict() for s in scored]}

    @app.get("/api/v1/profiles")
    def list_profiles():
        out = []
        for key in sorted(store.profiles):
            profile = store.profiles[key]
            entry = profile.to_dict()
            entry["category_subtotals"] = {
                cat.value: total for cat, total in profile.category_subtotals().items()
            }
            out.append(entry)
        return out

    @app.get("/api/v1/dimensions")
    def dimension_catalog():
        return [
            {
                "id": dim.value,
                "name": dim.display_name,
                "category": dim.category.value,
                "category_name": CATEGORY_LONG_NAMES[dim.category],
                "strategy": dim.strategy.value,
                "cap": DEFAULT_CAPS.get(dim),
            }
            for dim in ALL_DIMS
        ]

    @app.post("/api/v1/score")
    def what_if(request: WhatIfRequest):
        if not request.run_ids:
            raise ValidationFailure("run_ids must be nonempty")
        profile = _resolve_profile(store, request.profile, request.relax_sum)
        caps = _caps_for(store, request.caps)
        entries = _entries(request.run_ids)
        reports = [decision_score(e.dims, profile, caps) for e in entries]
        ranking = [r.run_id for r in sorted(reports, key=lambda r: (-r.score, r.run_id))]
        return {"reports": [r.to_dict() for r in reports], "ranking": ranking}

    @app.post("/api/v1/rdi")
    def divergence(request: CohortRequest):
        if not request.run_ids:
            raise ValidationFailure("run_ids must be nonempty")
        names = request.profiles or sorted(BUILTIN_PROFILES)
        profiles = []
        for name in names:
            profile = store.profiles.get(name.lower())
            if profile is None:
                raise UnknownProfile(name)
            profiles.append(profile)
        caps = _caps_for(store, request.caps)
        out = []
        for entry in _entries(request.run_ids):
            scores = {p.name: decision_score(entry.dims, p, caps).score for p in profiles}
            out.append(rdi(entry.run.run_id, scores).to_dict())
        out.sort(key=lambda r: (-r["rdi"], r["run_id"]))
        return out

    @app.post("/api/v1/impact")
    def sensitivity(request: ImpactRequest):
        if not request.run_ids:
            raise ValidationFailure("run_ids must be nonempty")
        profile = _resolve_profile(store, request.profile, relax_sum=False)
        caps = _caps_for(store, request.caps)
        entries = _entries(request.run_ids)
        cohort = Cohort(entries=[CohortEntry(run=e.run, dims=e.dims) for e in entries])
        return impact(cohort, profile, caps).to_dict()

    return app
