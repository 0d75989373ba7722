"""Rendering of score tables, comparisons and overlap reports.

Text output uses three decimals like the published tables; JSON keeps full
precision with sorted keys so identical runs give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Mapping, Optional, Sequence

from .metrics import INDICATORS, Scores, average_scores
from .overlap import OverlapReport, SetSummary
from .published import ComparisonCell


def fmt(v: Optional[float], digits: int = 3) -> str:
    return "undefined" if v is None else f"{v:.{digits}f}"


def fmt_pct(v: Optional[float]) -> str:
    return "n/a" if v is None else f"{100 * v:.2f}%"


def to_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def align(rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def scores_table(
    columns: Mapping[str, Mapping[str, Scores]], fmt_name: str = "text"
) -> str:
    """Per-project scores for one or more classifiers plus macro-averages.

    ``columns`` maps classifier name -> project -> Scores.
    """
    names = list(columns)
    projects = list(dict.fromkeys(p for col in columns.values() for p in col))
    avgs = {n: average_scores(columns[n]) for n in names}
    if fmt_name == "json":
        doc = {}
        for n in names:
            doc[n] = {
                "projects": {p: s.as_dict() for p, s in columns[n].items()},
                "average": {i: a.value for i, a in avgs[n].items()},
                "skipped_undefined": {i: a.skipped for i, a in avgs[n].items()},
            }
        return to_json(doc)
    header = ["project"] + [f"{n}:{ind}" if len(names) > 1 else ind for ind in INDICATORS for n in names]
    rows = [header]
    for p in projects:
        row = [p]
        for ind in INDICATORS:
            for n in names:
                s = columns[n].get(p)
                row.append(fmt(s.get(ind)) if s else "")
        rows.append(row)
    avg_row = ["Average"]
    for ind in INDICATORS:
        for n in names:
            avg_row.append(fmt(avgs[n][ind].value))
    rows.append(avg_row)
    if fmt_name == "csv":
        return _csv(rows)
    text = align(rows)
    notes = [
        f"{n}: {a.skipped} undefined {ind} value(s) skipped in average"
        for n in names for ind, a in avgs[n].items() if a.skipped
    ]
    return text + "".join(f"note: {x}\n" for x in notes)


def comparison_table(cells: Sequence[ComparisonCell], fmt_name: str = "text") -> str:
    if fmt_name == "json":
        return to_json([
            {
                "other": c.other,
                "indicator": c.indicator,
                "ours": c.ours,
                "theirs": c.theirs,
                "improvement": c.improvements,
                "average_improvement": c.average_improvement,
                "p_value": c.test.p_value,
                "significant": c.test.significant,
                "cliffs_delta": c.test.effect.delta,
                "magnitude": c.test.effect.magnitude.value,
            }
            for c in cells
        ])
    projects = list(cells[0].ours) if cells else []
    rows = [["project"]]
    for c in cells:
        rows[0] += [f"{c.other}:{c.indicator}", "impr"]
    for p in projects:
        row = [p]
        for c in cells:
            row += [fmt(c.theirs[p]), fmt_pct(c.improvements[p])]
        rows.append(row)
    rows.append(["Average"] + [x for c in cells for x in ("", fmt_pct(c.average_improvement))])
    rows.append(["p-value"] + [x for c in cells for x in (fmt(c.test.p_value), "*" if c.test.significant else "")])
    rows.append(["cliffs-delta"] + [x for c in cells for x in (fmt(c.test.effect.delta), c.test.effect.magnitude.value)])
    if fmt_name == "csv":
        return _csv(rows)
    return align(rows)


def _summary_json(s: SetSummary) -> dict:
    return {
        "union": s.union,
        "overlapped": s.overlapped,
        "overlapped_pct": s.overlapped_pct,
        "unique": s.unique,
        "unique_pct": {n: s.unique_pct(n) for n in s.approaches},
        "regions": {"+".join(k): v for k, v in s.regions.items()},
    }


def overlap_table(rep: OverlapReport, fmt_name: str = "text") -> str:
    if fmt_name == "json":
        return to_json({
            "approaches": list(rep.approaches),
            "tp": {p: _summary_json(s) for p, s in rep.tp.items()},
            "tn": {p: _summary_json(s) for p, s in rep.tn.items()},
            "total_tp": _summary_json(rep.total_tp),
            "total_tn": _summary_json(rep.total_tn),
        })

    def pct(v):
        return "n/a" if v is None else f"{v:.2f}%"

    header = ["project", "#TPs", "overlap"] + list(rep.approaches) + ["#TNs", "overlap"] + list(rep.approaches)
    rows = [header]
    items = list(rep.tp.items()) + [("Total", rep.total_tp)]
    tn = dict(rep.tn, Total=rep.total_tn)
    for p, s in items:
        t = tn[p]
        rows.append(
            [p, str(s.union), pct(s.overlapped_pct)] + [pct(s.unique_pct(n)) for n in rep.approaches]
            + [str(t.union), pct(t.overlapped_pct)] + [pct(t.unique_pct(n)) for n in rep.approaches]
        )
    if fmt_name == "csv":
        return _csv(rows)
    return align(rows)
