"""Wilcoxon signed-rank test and Cliff's delta."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

ALPHA = 0.05


class Magnitude(str, enum.Enum):
    NEGLIGIBLE = "negligible"
    SMALL = "small"
    MODERATE = "moderate"
    LARGE = "large"


def magnitude(delta: float) -> Magnitude:
    d = abs(delta)
    if d < 0.147:
        return Magnitude.NEGLIGIBLE
    if d < 0.33:
        return Magnitude.SMALL
    if d < 0.474:
        return Magnitude.MODERATE
    return Magnitude.LARGE


@dataclass(frozen=True)
class EffectSize:
    delta: float
    magnitude: Magnitude


@dataclass(frozen=True)
class TestResult:
    p_value: float
    effect: EffectSize

    @property
    def significant(self) -> bool:
        return self.p_value < ALPHA


def cliffs_delta(a: Sequence[float], b: Sequence[float]) -> EffectSize:
    """P(a > b) - P(a < b) over all cross pairs."""
    if not a or not b:
        raise ValueError("Cliff's delta needs two non-empty samples")
    gt = lt = 0
    for x in a:
        for y in b:
            if x > y:
                gt += 1
            elif x < y:
                lt += 1
    d = (gt - lt) / (len(a) * len(b))
    return EffectSize(d, magnitude(d))


def _ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks with ties averaged."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def signed_rank_statistic(a: Sequence[float], b: Sequence[float], decimals: Optional[int] = None):
    """Return (W+, ranks of non-zero |d|, has_ties, n_zero).

    Differences are compared as raw doubles unless ``decimals`` is given,
    in which case they are rounded first so that e.g. 0.3-0.2 and 0.2-0.1
    tie.
    """
    if len(a) != len(b):
        raise ValueError(f"paired samples differ in length ({len(a)} vs {len(b)})")
    diffs = [x - y for x, y in zip(a, b)]
    if decimals is not None:
        diffs = [round(d, decimals) for d in diffs]
    nonzero = [d for d in diffs if d != 0]
    ranks = _ranks([abs(d) for d in nonzero])
    w_plus = sum(r for r, d in zip(ranks, nonzero) if d > 0)
    has_ties = len(set(abs(d) for d in nonzero)) < len(nonzero)
    return w_plus, ranks, has_ties, len(diffs) - len(nonzero)


def exact_p(w_plus: float, ranks: Sequence[float]) -> float:
    """Two-sided exact p-value by counting sign assignments.

    Ranks are doubled to integers so averaged ties enumerate exactly.
    """
    n = len(ranks)
    iranks = [int(round(2 * r)) for r in ranks]
    total = sum(iranks)
    dist = [0] * (total + 1)
    dist[0] = 1
    for r in iranks:
        for s in range(total, r - 1, -1):
            dist[s] += dist[s - r]
    w2 = int(round(2 * w_plus))
    lo, hi = min(w2, total - w2), max(w2, total - w2)
    tail = sum(dist[: lo + 1]) + sum(dist[hi:]) if lo != hi else 2 ** n
    return min(1.0, tail / 2 ** n)


def approx_p(w_plus: float, ranks: Sequence[float], correction: bool = True) -> float:
    """Normal approximation with tie-corrected variance and continuity correction."""
    n = len(ranks)
    mean = n * (n + 1) / 4
    counts: dict[float, int] = {}
    for r in ranks:
        counts[r] = counts.get(r, 0) + 1
    tie_adj = sum(t ** 3 - t for t in counts.values()) / 48
    var = n * (n + 1) * (2 * n + 1) / 24 - tie_adj
    if var <= 0:
        return 1.0
    z = w_plus - mean
    if correction:
        z -= math.copysign(0.5, z) if z != 0 else 0.0
    z /= math.sqrt(var)
    return min(1.0, math.erfc(abs(z) / math.sqrt(2)))


def wilcoxon_signed_rank(
    a: Sequence[float], b: Sequence[float], method: str = "auto", decimals: Optional[int] = None
) -> float:
    """Two-sided Wilcoxon signed-rank p-value; zero differences are dropped.

    ``auto`` uses the exact distribution when there are fewer than 50
    non-zero pairs and no ties or zeros, otherwise the normal
    approximation. ``exact`` enumerates (ties allowed, n <= 25) and
    ``approx`` always uses the normal approximation. All-zero differences
    give p = 1. ``decimals`` is passed to :func:`signed_rank_statistic`.
    """
    if len(a) < 2:
        raise ValueError("Wilcoxon test needs at least two pairs")
    w_plus, ranks, has_ties, n_zero = signed_rank_statistic(a, b, decimals)
    if not ranks:
        return 1.0
    if method == "auto":
        method = "exact" if len(ranks) < 50 and not has_ties and n_zero == 0 else "approx"
    if method == "exact":
        if len(ranks) > 25:
            raise ValueError("exact enumeration limited to 25 non-zero pairs")
        return exact_p(w_plus, ranks)
    if method == "approx":
        return approx_p(w_plus, ranks)
    raise ValueError(f"unknown method {method!r}")


def compare_samples(a: Sequence[float], b: Sequence[float], method: str = "auto") -> TestResult:
    return TestResult(wilcoxon_signed_rank(a, b, method), cliffs_delta(a, b))
