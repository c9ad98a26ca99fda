"""Command-line surface: score runs, inspect dimensions, run cohort analyses.

Exit codes: 0 success, 1 I/O failure, 2 validation failure, 3 empty or
degenerate cohort (nothing scoreable).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import render
from .cohort import Cohort, category_leaders, impact, leaderboard, rdi
from .dimensions import compute_all
from .errors import DegenerateInput, ValidationFailure
from .normalize import CapTable, normalize_vector
from .profiles import (
    BUILTIN_PROFILES,
    ProfileRegistry,
    RoleProfile,
    load_profile_file,
    validate,
)
from .results import RunRecord, load_results, serialize_run
from .scoring import decision_score
from .synth import SynthSpec, generate

PROFILE_DIR_ENV = "ROLESCORE_PROFILE_DIR"

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_DEGENERATE = 3


def _resolve_profile(token: str) -> RoleProfile:
    """Bare names hit the built-ins (then $ROLESCORE_PROFILE_DIR); paths load files."""
    if os.sep in token or token.endswith((".yaml", ".yml")):
        return load_profile_file(token)
    key = token.lower()
    if key in BUILTIN_PROFILES:
        return BUILTIN_PROFILES[key]
    search_dir = os.environ.get(PROFILE_DIR_ENV)
    if search_dir:
        for suffix in (".yaml", ".yml"):
            candidate = Path(search_dir) / f"{token}{suffix}"
            if candidate.is_file():
                return load_profile_file(str(candidate))
    raise ValidationFailure(
        f"unknown profile '{token}' (not a built-in, no file in ${PROFILE_DIR_ENV})")


def _resolve_profiles(tokens: list[str] | None) -> list[RoleProfile]:
    if not tokens:
        return list(BUILTIN_PROFILES.values())
    return [_resolve_profile(t) for t in tokens]


def _resolve_runs(tokens: list[str]) -> list[RunRecord]:
    paths: list[Path] = []
    for token in tokens:
        p = Path(token)
        if p.is_dir():
            found = sorted(p.glob("*.jsonl"))
            if not found:
                raise FileNotFoundError(f"no *.jsonl files in {p}")
            paths.extend(found)
        else:
            paths.append(p)
    return [load_results(str(p)) for p in paths]


def _load_caps(path: str | None) -> CapTable:
    return CapTable.load(path) if path else CapTable.default()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_score(args: argparse.Namespace) -> int:
    runs = _resolve_runs(args.results)
    profiles = _resolve_profiles(args.profile)
    caps = _load_caps(args.caps)
    reports = []
    for run in runs:
        dims = compute_all(run)
        for profile in profiles:
            reports.append(decision_score(dims, profile, caps))
    if args.format == "json":
        _emit(_json({"reports": [r.to_dict() for r in reports]}), args.out)
    else:
        _emit("\n".join(render.report_markdown(r) for r in reports), args.out)
    return EXIT_OK


def cmd_dimensions(args: argparse.Namespace) -> int:
    runs = _resolve_runs(args.results)
    caps = _load_caps(args.caps)
    blocks = []
    for run in runs:
        scored = normalize_vector(compute_all(run), caps)
        if args.format == "json":
            blocks.append({"run_id": run.run_id, "values": [s.to_dict() for s in scored]})
        else:
            blocks.append(render.dimensions_markdown(run.run_id, scored))
    if args.format == "json":
        _emit(_json(blocks[0] if len(blocks) == 1 else blocks), args.out)
    else:
        _emit("\n".join(blocks), args.out)
    return EXIT_OK


def cmd_leaderboard(args: argparse.Namespace) -> int:
    cohort = Cohort.from_runs(_resolve_runs(args.results))
    caps = _load_caps(args.caps)
    if args.profile:
        tables = [
            (profile.name, leaderboard(cohort, "decision_score", profile, caps))
            for profile in _resolve_profiles(args.profile)
        ]
    else:
        tables = [("benchmark_pct", leaderboard(cohort, "benchmark_pct"))]
    if args.format == "json":
        _emit(_json({name: [row.to_dict() for row in rows] for name, rows in tables}),
              args.out)
    else:
        _emit("\n".join(render.leaderboard_markdown(rows, name) for name, rows in tables),
              args.out)
    return EXIT_OK


def cmd_rdi(args: argparse.Namespace) -> int:
    cohort = Cohort.from_runs(_resolve_runs(args.results))
    profiles = _resolve_profiles(args.profile)
    caps = _load_caps(args.caps)
    results = []
    for entry in cohort.entries:
        scores = {
            p.name: decision_score(entry.dims, p, caps).score for p in profiles
        }
        results.append(rdi(entry.run.run_id, scores))
    results.sort(key=lambda r: (-r.rdi, r.run_id))
    if args.format == "json":
        _emit(_json([r.to_dict() for r in results]), args.out)
    else:
        _emit(render.rdi_markdown(results), args.out)
    return EXIT_OK


def cmd_impact(args: argparse.Namespace) -> int:
    cohort = Cohort.from_runs(_resolve_runs(args.results))
    caps = _load_caps(args.caps)
    results = [impact(cohort, profile, caps) for profile in _resolve_profiles(args.profile)]
    if args.format == "json":
        _emit(_json([r.to_dict() for r in results]), args.out)
    else:
        _emit("\n".join(render.impact_markdown(r) for r in results), args.out)
    return EXIT_OK


def cmd_category_leaders(args: argparse.Namespace) -> int:
    cohort = Cohort.from_runs(_resolve_runs(args.results))
    table = category_leaders(cohort)
    if args.format == "json":
        _emit(_json({
            category: [{"run_id": run_id, "f1": f1} for run_id, f1 in ranking]
            for category, ranking in table.items()
        }), args.out)
    else:
        _emit(render.category_leaders_markdown(table), args.out)
    return EXIT_OK


def cmd_validate_profile(args: argparse.Namespace) -> int:
    violations: list = []
    profile = None
    try:
        profile = load_profile_file(args.path)
        violations = validate(profile)  # load validates; belt and braces
    except ValidationFailure as exc:
        found = getattr(exc, "violations", None)
        if found:
            violations = list(found)
        else:
            from .profiles import Violation

            violations = [Violation("parse", str(exc))]

    if args.format == "json":
        doc = {
            "path": args.path,
            "valid": not violations,
            "violations": [{"code": v.code, "message": v.message} for v in violations],
        }
        if profile is not None and not violations:
            doc["name"] = profile.name
            doc["dimensions"] = len(profile.weights)
            doc["sum"] = sum(profile.weights.values())
        _emit(_json(doc), args.out)
    else:
        if violations:
            lines = [f"violation [{v.code}]: {v.message}" for v in violations]
        else:
            assert profile is not None
            total = sum(profile.weights.values())
            lines = [f"valid: {profile.name} ({len(profile.weights)} dimensions, sum {total})"]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if not violations else EXIT_VALIDATION


def cmd_synth(args: argparse.Namespace) -> int:
    spec = SynthSpec.load(args.spec)
    if args.seed is not None:
        from dataclasses import replace
        spec = replace(spec, seed=args.seed)
    run = generate(spec)
    _emit(serialize_run(run), args.out)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import build_store, create_app

    store = build_store(_resolve_runs(args.results), _load_caps(args.caps))
    app = create_app(store)
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, results: bool = True,
                profiles: bool = True) -> None:
    if results:
        parser.add_argument("--results", action="append", required=True,
                            help="run file or directory of *.jsonl run files (repeatable)")
    if profiles:
        parser.add_argument("--profile", action="append",
                            help="built-in profile name or profile file path (repeatable)")
    parser.add_argument("--caps", help="JSON file overriding normalization caps")
    parser.add_argument("--format", choices=("json", "markdown"), default="json")
    parser.add_argument("--out", help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rolescore",
        description="Role-specific decision scores for vulnerability-detection runs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score runs under role profiles")
    _add_common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("dimensions", help="raw and normalized dimension values")
    _add_common(p, profiles=False)
    p.set_defaults(func=cmd_dimensions)

    p = sub.add_parser("leaderboard", help="rank runs by benchmark %% or decision score")
    _add_common(p)
    p.set_defaults(func=cmd_leaderboard)

    p = sub.add_parser("rdi", help="role divergence per run")
    _add_common(p)
    p.set_defaults(func=cmd_rdi)

    p = sub.add_parser("impact", help="weight x cross-run variance per dimension")
    _add_common(p)
    p.set_defaults(func=cmd_impact)

    p = sub.add_parser("category-leaders", help="per-category F1 ranking across runs")
    _add_common(p, profiles=False)
    p.set_defaults(func=cmd_category_leaders)

    p = sub.add_parser("validate-profile", help="check a profile file")
    p.add_argument("path")
    p.add_argument("--format", choices=("json", "markdown"), default="markdown")
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.set_defaults(func=cmd_validate_profile)

    p = sub.add_parser("synth", help="generate a synthetic run from a spec")
    p.add_argument("spec", help="JSON synthesis spec")
    p.add_argument("--seed", type=int, help="override the spec's seed")
    p.add_argument("--out", help="write the run file here instead of stdout")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("serve", help="serve the what-if scoring API")
    p.add_argument("--results", action="append", required=True)
    p.add_argument("--caps")
    p.add_argument("--port", type=int, default=8080)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DegenerateInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValidationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
