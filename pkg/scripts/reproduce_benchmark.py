#!/usr/bin/env python3
"""End-to-end benchmark on a labeled comment dataset.

Imports ``<dataset>/<project>/{comments,labels}``, evaluates every detector
under MTO and OTO, and writes score tables, MTO predictions, the comparison with
the published numbers and the MAT/TM overlap report into --out-dir.

    python3 scripts/reproduce_benchmark.py $SATD_DATASET --out-dir results/bench
"""
import argparse
import os
import sys
from importlib import resources
from pathlib import Path

from satdmat.cli import main as satdmat

DETECTORS = ("mat-strict", "mat-fuzzy", "mat-ext", "pattern", "tm", "tm+mat")


def step(argv):
    print("+ satdmat " + " ".join(argv), file=sys.stderr)
    code = satdmat(argv)
    if code:
        raise SystemExit(code)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("dataset", nargs="?", default=os.environ.get("SATD_DATASET"))
    ap.add_argument("--out-dir", default="results/benchmark")
    ap.add_argument("--label-map", default=os.environ.get("SATD_LABEL_MAP"))
    ap.add_argument("--parallelism", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()
    if not args.dataset:
        ap.error("give a dataset directory or set SATD_DATASET")

    out = Path(args.out_dir)
    corpora = out / "corpora"
    imp = ["import", args.dataset, "--out", str(corpora)]
    if args.label_map:
        imp += ["--label-map", args.label_map]
    step(imp)
    files = sorted(str(p) for p in corpora.glob("*.jsonl"))

    par = ["--parallelism", str(args.parallelism)]
    patterns = str(resources.files("satdmat") / "data" / "patterns.txt")
    for scenario in ("mto", "oto"):
        detectors = DETECTORS if scenario == "mto" else ("mat-fuzzy", "tm", "tm+mat")
        cls = [a for d in detectors for a in ("--classifier", d)]
        preds = out / f"predictions-{scenario}"
        for fmt, ext in (("text", "txt"), ("json", "json")):
            step(["evaluate", *files, *cls, "--scenario", scenario, "--format", fmt,
                  "--patterns", patterns,
                  "--out", str(out / f"scores-{scenario}.{ext}"),
                  "--save-predictions", str(preds), *par])
        extra = []
        # OTO averages over source projects, so only MTO has one prediction per comment
        if scenario == "mto":
            extra = ["--include-average", "NLP",
                     "--predictions", f"MAT={preds / 'mat-fuzzy.jsonl'}",
                     "--predictions", f"TM={preds / 'tm.jsonl'}"]
        step(["compare", *files, "--classifier", "mat-fuzzy", "--scenario", scenario,
              "--out", str(out / f"compare-{scenario}.txt"), *extra, *par])
    print(f"results in {out}", file=sys.stderr)


if __name__ == "__main__":
    main()
