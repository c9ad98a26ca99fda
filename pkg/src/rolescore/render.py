"""Markdown rendering for reports and cohort tables.

Markdown shows scores at one decimal (round-half-even, like the JSON side
never does: JSON always carries full precision).
"""

from __future__ import annotations

from .cohort import ImpactResult, LeaderboardRow, RdiResult
from .dimensions import CATEGORY_LONG_NAMES, Dim
from .normalize import ScoredDimension
from .scoring import DecisionReport


def _table(headers: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(headers) + " |",
             "|" + "|".join(" --- " for _ in headers) + "|"]
    lines.extend("| " + " | ".join(row) + " |" for row in rows)
    return "\n".join(lines)


def _fmt(value: float, places: int = 1) -> str:
    return f"{round(value, places):.{places}f}"


def report_markdown(report: DecisionReport) -> str:
    out = [
        f"## {report.run_id} under {report.profile_name}",
        "",
        f"**Decision Score: {_fmt(report.score)} ({report.grade})** "
        f"over available weight {report.available_weight}",
        "",
        _table(
            ["Dim", "Name", "Weight", "Score", "Weighted"],
            [[c.dim.value, c.dim.display_name, str(c.weight), _fmt(c.score, 3),
              _fmt(c.weighted, 3)] for c in report.contributions],
        ),
    ]
    if report.exclusions:
        out += [
            "",
            "Excluded:",
            "",
            _table(
                ["Dim", "Name", "Weight", "Reason"],
                [[e.dim.value, e.dim.display_name, str(e.weight), str(e.reason)]
                 for e in report.exclusions],
            ),
        ]
    out += [
        "",
        _table(
            ["Category", "Weight", "Mean Score"],
            [[CATEGORY_LONG_NAMES[cat], str(sub.weight), _fmt(sub.score, 3)]
             for cat, sub in report.category_subtotals_scored.items()],
        ),
    ]
    return "\n".join(out) + "\n"


def dimensions_markdown(run_id: str, scored: list[ScoredDimension]) -> str:
    rows = []
    for s in scored:
        if s.available:
            rows.append([s.dim.value, s.dim.display_name, s.dim.category.value,
                         _fmt(s.raw, 4), _fmt(s.score, 4), s.note or ""])
        else:
            rows.append([s.dim.value, s.dim.display_name, s.dim.category.value,
                         "-", "-", str(s.reason)])
    return (f"## Dimensions for {run_id}\n\n"
            + _table(["Dim", "Name", "Category", "Raw", "Score", "Note"], rows) + "\n")


def leaderboard_markdown(rows: list[LeaderboardRow], metric: str) -> str:
    body = [[str(i + 1), r.run_id, r.model_name, _fmt(r.value)]
            for i, r in enumerate(rows)]
    return (f"## Leaderboard ({metric})\n\n"
            + _table(["#", "Run", "Model", "Score"], body) + "\n")


def rdi_markdown(results: list[RdiResult]) -> str:
    body = [[r.run_id, _fmt(r.rdi),
             f"{r.best_role[0]} ({_fmt(r.best_role[1])})",
             f"{r.worst_role[0]} ({_fmt(r.worst_role[1])})"]
            for r in results]
    return ("## Role divergence\n\n"
            + _table(["Run", "RDI", "Best Role", "Worst Role"], body) + "\n")


def impact_markdown(result: ImpactResult) -> str:
    body = [[e.dim.value, e.dim.display_name, str(e.weight),
             _fmt(e.variance, 4), _fmt(e.impact, 3)] for e in result.entries]
    out = (f"## Impact under {result.profile_name}\n\n"
           + _table(["Dim", "Name", "Weight", "Variance", "Impact"], body))
    if result.skipped:
        skipped = ", ".join(f"{d.value} ({note})" for d, note in result.skipped)
        out += f"\n\nSkipped: {skipped}"
    return out + "\n"


def category_leaders_markdown(table: dict[str, list[tuple[str, float]]]) -> str:
    rows = []
    for category, ranking in table.items():
        best = ranking[0]
        worst = ranking[-1]
        rows.append([category, f"{best[0]} ({_fmt(best[1], 3)})",
                     f"{worst[0]} ({_fmt(worst[1], 3)})"])
    return "## Category leaders\n\n" + _table(["Category", "Best", "Worst"], rows) + "\n"
