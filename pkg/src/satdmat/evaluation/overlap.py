"""Set overlap of correctly classified comments across approaches."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from ..corpus import Comment, Label
from ..matchers import Prediction


@dataclass(frozen=True)
class SetSummary:
    approaches: tuple[str, ...]
    union: int
    overlapped: int
    unique: dict[str, int]
    # disjoint Venn regions keyed by the approaches that share them
    regions: dict[tuple[str, ...], int] = field(default_factory=dict)

    def pct(self, count: int) -> float | None:
        return 100.0 * count / self.union if self.union else None

    @property
    def overlapped_pct(self):
        return self.pct(self.overlapped)

    def unique_pct(self, name: str):
        return self.pct(self.unique[name])


@dataclass(frozen=True)
class OverlapReport:
    approaches: tuple[str, ...]
    tp: dict[str, SetSummary]
    tn: dict[str, SetSummary]
    total_tp: SetSummary
    total_tn: SetSummary


def _summarise(names: tuple[str, ...], sets: Mapping[str, set]) -> SetSummary:
    union = set().union(*sets.values())
    regions = {}
    for k in range(len(names), 0, -1):
        for combo in combinations(names, k):
            inside = set.intersection(*(sets[n] for n in combo))
            outside = set().union(*(sets[n] for n in names if n not in combo))
            count = len(inside - outside)
            if count:
                regions[combo] = count
    overlapped = len(set.intersection(*sets.values())) if sets else 0
    unique = {n: regions.get((n,), 0) for n in names}
    return SetSummary(names, len(union), overlapped, unique, regions)


def _correct_sets(preds: Sequence[Prediction], gold: Sequence[Comment]):
    if len(preds) != len(gold):
        raise ValueError("predictions and comments differ in length")
    tp, tn = {}, {}
    for p, c in zip(preds, gold):
        if (p.project, p.id) != (c.project, c.id):
            raise ValueError(f"prediction {p.project}#{p.id} misaligned with {c.project}#{c.id}")
        actual = c.gold_label is Label.SATD
        if p.is_satd and actual:
            tp.setdefault(c.project, set()).add(c.id)
        elif not p.is_satd and not actual:
            tn.setdefault(c.project, set()).add(c.id)
    return tp, tn


def overlap_analysis(
    predictions: Mapping[str, Sequence[Prediction]], gold: Sequence[Comment]
) -> OverlapReport:
    """Per-project TP and TN overlap for two or more approaches."""
    names = tuple(predictions)
    if len(names) < 2:
        raise ValueError("overlap analysis needs at least two approaches")
    per = {n: _correct_sets(predictions[n], gold) for n in names}
    projects = list(dict.fromkeys(c.project for c in gold))
    tp, tn = {}, {}
    all_tp = {n: set() for n in names}
    all_tn = {n: set() for n in names}
    for proj in projects:
        tp_sets = {n: per[n][0].get(proj, set()) for n in names}
        tn_sets = {n: per[n][1].get(proj, set()) for n in names}
        tp[proj] = _summarise(names, tp_sets)
        tn[proj] = _summarise(names, tn_sets)
        for n in names:
            all_tp[n] |= {(proj, i) for i in tp_sets[n]}
            all_tn[n] |= {(proj, i) for i in tn_sets[n]}
    return OverlapReport(names, tp, tn, _summarise(names, all_tp), _summarise(names, all_tn))
