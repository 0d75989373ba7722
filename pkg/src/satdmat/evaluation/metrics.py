"""Confusion matrices and precision/recall/F1 with SATD as the positive class."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from ..corpus import Comment, Label
from ..matchers import Prediction


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            self.tp + other.tp, self.fp + other.fp, self.tn + other.tn, self.fn + other.fn
        )


@dataclass(frozen=True)
class Scores:
    """``None`` marks an undefined score (zero denominator)."""

    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]

    def get(self, indicator: str) -> Optional[float]:
        return getattr(self, indicator)

    def as_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


INDICATORS = ("precision", "recall", "f1")


def confusion(predictions: Sequence[Prediction], gold: Sequence[Comment]) -> ConfusionMatrix:
    if len(predictions) != len(gold):
        raise ValueError(f"{len(predictions)} predictions for {len(gold)} comments")
    tp = fp = tn = fn = 0
    for p, c in zip(predictions, gold):
        if (p.project, p.id) != (c.project, c.id):
            raise ValueError(
                f"prediction {p.project}#{p.id} does not align with comment {c.project}#{c.id}"
            )
        if c.gold_label is None:
            raise ValueError(f"comment {c.project}#{c.id} has no gold label")
        actual = c.gold_label is Label.SATD
        if p.is_satd:
            tp, fp = (tp + 1, fp) if actual else (tp, fp + 1)
        else:
            fn, tn = (fn + 1, tn) if actual else (fn, tn + 1)
    return ConfusionMatrix(tp, fp, tn, fn)


def harmonic_mean(p: Optional[float], r: Optional[float]) -> Optional[float]:
    if p is None or r is None:
        return None
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


def scores(m: ConfusionMatrix) -> Scores:
    p = m.tp / (m.tp + m.fp) if m.tp + m.fp else None
    r = m.tp / (m.tp + m.fn) if m.tp + m.fn else None
    return Scores(p, r, harmonic_mean(p, r))


@dataclass(frozen=True)
class Average:
    value: Optional[float]
    n: int
    skipped: int


def macro_average(values: Iterable[Optional[float]]) -> Average:
    """Arithmetic mean over defined values; undefined cells are counted, not zeroed."""
    vals = list(values)
    defined = [v for v in vals if v is not None]
    mean = math.fsum(defined) / len(defined) if defined else None
    return Average(mean, len(defined), len(vals) - len(defined))


def average_scores(per_project: Mapping[str, Scores]) -> dict[str, Average]:
    return {
        ind: macro_average(s.get(ind) for s in per_project.values()) for ind in INDICATORS
    }


def improvement(ours: float, other: float) -> Optional[float]:
    """Relative improvement (ours - other) / other, as a fraction."""
    if other == 0:
        return None
    return (ours - other) / other
