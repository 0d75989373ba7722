"""Published per-project scores and MAT-vs-other comparisons."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .metrics import INDICATORS, improvement
from .stats import TestResult, compare_samples

AVERAGE = "Average"


@dataclass(frozen=True)
class PublishedScores:
    """Score table keyed by (approach, project, indicator, scenario)."""

    cells: dict = field(default_factory=dict)

    def get(self, approach: str, project: str, indicator: str, scenario: str = "mto") -> float:
        try:
            return self.cells[(approach, project, indicator, scenario)]
        except KeyError:
            raise KeyError(
                f"no published value for approach={approach} project={project} "
                f"indicator={indicator} scenario={scenario}"
            ) from None

    def approaches(self) -> list[str]:
        return list(dict.fromkeys(k[0] for k in self.cells))

    def projects(self, approach: str, scenario: str = "mto") -> list[str]:
        return list(dict.fromkeys(
            k[1] for k in self.cells if k[0] == approach and k[3] == scenario and k[1] != AVERAGE
        ))

    def column(
        self, approach: str, indicator: str, scenario: str, projects: Iterable[str]
    ) -> list[float]:
        return [self.get(approach, p, indicator, scenario) for p in projects]


def load_published(path: str | Path | None = None) -> PublishedScores:
    """Read the ``approach,project,indicator,value[,scenario]`` CSV; ``#`` lines are comments."""
    if path is None:
        path = resources.files("satdmat") / "data" / "published_scores.csv"
    cells = {}
    with open(path, encoding="utf-8", newline="") as f:
        rows = csv.DictReader(line for line in f if not line.startswith("#"))
        missing = {"approach", "project", "indicator", "value"} - set(rows.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        for i, row in enumerate(rows, 2):
            ind = row["indicator"].strip().lower()
            if ind not in INDICATORS:
                raise ValueError(f"{path}:{i}: unknown indicator {row['indicator']!r}")
            scenario = (row.get("scenario") or "mto").strip().lower()
            key = (row["approach"].strip(), row["project"].strip(), ind, scenario)
            cells[key] = float(row["value"])
    return PublishedScores(cells)


@dataclass(frozen=True)
class ComparisonCell:
    other: str
    indicator: str
    ours: dict[str, float]
    theirs: dict[str, float]
    improvements: dict[str, Optional[float]]
    average_improvement: Optional[float]
    test: TestResult


def compare_against_published(
    ours: Mapping[str, Mapping[str, float]],
    published: PublishedScores,
    others: Iterable[str],
    scenario: str = "mto",
    indicators: Iterable[str] = INDICATORS,
    include_average: Iterable[str] = (),
    method: str = "auto",
) -> list[ComparisonCell]:
    """Compare our per-project scores with published columns.

    ``ours`` maps project -> indicator -> value. Improvements are
    ``(ours - other) / other``; the average improvement compares column
    means. Approaches named in ``include_average`` get the macro-average
    row appended to both samples before the statistics are computed.
    """
    include_average = set(include_average)
    projects = [p for p in ours if p != AVERAGE]
    out = []
    for other in others:
        for ind in indicators:
            mine = {p: ours[p][ind] for p in projects}
            if any(v is None for v in mine.values()):
                raise ValueError(f"undefined {ind} in our scores; cannot compare")
            theirs = {p: published.get(other, p, ind, scenario) for p in projects}
            imp = {p: improvement(mine[p], theirs[p]) for p in projects}
            mean_mine = sum(mine.values()) / len(mine)
            mean_theirs = sum(theirs.values()) / len(theirs)
            a = [mine[p] for p in projects]
            b = [theirs[p] for p in projects]
            if other in include_average:
                a.append(ours[AVERAGE][ind] if AVERAGE in ours else mean_mine)
                b.append(published.get(other, AVERAGE, ind, scenario))
            out.append(ComparisonCell(
                other, ind, mine, theirs, imp,
                improvement(mean_mine, mean_theirs),
                compare_samples(a, b, method),
            ))
    return out


def published_as_ours(
    published: PublishedScores, approach: str, scenario: str = "mto", with_average: bool = True
) -> dict[str, dict[str, float]]:
    """A published column in the ``ours`` shape, e.g. to treat MAT's row as ours."""
    projects = published.projects(approach, scenario)
    if with_average:
        projects = projects + [AVERAGE]
    return {
        p: {ind: published.get(approach, p, ind, scenario) for ind in INDICATORS}
        for p in projects
    }
