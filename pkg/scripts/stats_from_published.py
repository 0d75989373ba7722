#!/usr/bin/env python3
"""Recompute Wilcoxon p-values and Cliff's delta from the bundled score table.

Nothing is trained here; MAT's published per-project scores are compared with
every baseline under both scenarios. Output goes to stdout or, with --out-dir,
one file per scenario.

    python3 scripts/stats_from_published.py --out-dir results/published
"""
import argparse
import sys
from pathlib import Path

from satdmat.cli import main as satdmat


def run(out_dir, fmt, approach):
    ext = {"text": "txt", "json": "json", "csv": "csv"}[fmt]
    status = 0
    for scenario in ("mto", "oto"):
        argv = ["compare", "--ours-published", approach, "--scenario", scenario,
                "--format", fmt]
        # the NLP baseline's sample includes its Average row
        if scenario == "mto":
            argv += ["--include-average", "NLP"]
        if out_dir:
            argv += ["--out", str(Path(out_dir) / f"{approach.lower()}-{scenario}.{ext}")]
        else:
            print(f"== {approach} vs baselines, {scenario.upper()} ==")
        status |= satdmat(argv)
    return status


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--approach", default="MAT", help="column to treat as 'ours'")
    ap.add_argument("--format", default="text", choices=("text", "json", "csv"))
    ap.add_argument("--out-dir")
    args = ap.parse_args()
    if args.out_dir:
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    sys.exit(run(args.out_dir, args.format, args.approach))
