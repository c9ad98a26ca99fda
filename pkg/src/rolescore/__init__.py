"""Role-specific decision scoring for vulnerability-detection benchmark runs."""

from .cohort import Cohort, benchmark_pct, category_leaders, impact, leaderboard, rdi
from .dimensions import Category, Dim, DimensionValue, DimensionVector, compute_all, per_group_f1
from .normalize import DEFAULT_CAPS, CapTable, normalize, normalize_vector
from .profiles import (
    BUILTIN_PROFILES,
    ProfileRegistry,
    RoleProfile,
    load_profile,
    serialize_profile,
    validate,
)
from .results import (
    ConfusionMatrix,
    Layer,
    RunRecord,
    TaskResult,
    confusion,
    interval_iou,
    load_results,
    parse_results,
    serialize_run,
)
from .scoring import DecisionReport, decision_score, grade
from .synth import SynthSpec, generate
from .oracle import oracle_dimensions

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_PROFILES", "CapTable", "Category", "Cohort", "ConfusionMatrix",
    "DEFAULT_CAPS", "DecisionReport", "Dim", "DimensionValue", "DimensionVector",
    "Layer", "ProfileRegistry", "RoleProfile", "RunRecord", "SynthSpec", "TaskResult",
    "benchmark_pct", "category_leaders", "compute_all", "confusion", "decision_score",
    "generate", "grade", "impact", "interval_iou", "leaderboard", "load_profile",
    "load_results", "normalize", "normalize_vector", "oracle_dimensions",
    "parse_results", "per_group_f1", "rdi", "serialize_profile", "serialize_run",
    "validate",
]
