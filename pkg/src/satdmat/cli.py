"""Command-line entry point: ``satdmat {import,scan,classify,evaluate,compare}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .corpus import (
    Comment, Corpus, CorpusError, Label, LabelMapping, import_benchmark,
    import_benchmark_dir, read_corpus, write_corpus,
)
from .extractor import FILTER_RULES, JAVA, FilterConfig, apply_filters, load_config, scan_file
from .matchers import ClassifierSpec, PatternSet, Prediction, Strategy, TagSet, classify_corpus, load_project_tags
from .tm import TmConfig, combine_with_mat, load_ensemble, save_ensemble, train_tm
from .textprep import load_stopwords
from .evaluation import report
from .evaluation.metrics import INDICATORS, Scores, average_scores
from .evaluation.overlap import overlap_analysis
from .evaluation.published import (
    AVERAGE, compare_against_published, load_published, published_as_ours,
)
from .evaluation.scenarios import pmap, run_scenario

log = logging.getLogger("satdmat")

CLASSIFIERS = ("mat", "mat-strict", "mat-fuzzy", "mat-ext", "pattern", "tm", "tm+mat")


class UsageError(Exception):
    pass


# -- shared helpers ----------------------------------------------------------

def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_corpora(paths: Sequence[str]) -> dict[str, Corpus]:
    """Read JSONL files (or directories of them), split by project."""
    files: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            files.extend(sorted(p.glob("*.jsonl")))
        elif p.exists():
            files.append(p)
        else:
            raise UsageError(f"{p}: no such file or directory")
    corpora: dict[str, Corpus] = {}
    for f in files:
        for proj, c in read_corpus(f).by_project().items():
            if proj in corpora:
                raise UsageError(f"project {proj} appears in more than one input")
            corpora[proj] = c
    return corpora


def _spec(args, name: str) -> ClassifierSpec:
    strategy = Strategy(args.strategy)
    if name in ("mat-strict", "mat-fuzzy"):
        strategy = Strategy(name.split("-")[1])
        name = "mat"
    tags = TagSet.from_file(args.tags) if args.tags else TagSet.default()
    patterns = None
    if name == "pattern":
        if not args.patterns:
            raise UsageError("--classifier pattern requires --patterns FILE")
        patterns = PatternSet.from_file(args.patterns)
    project_tags = None
    if name == "mat-ext":
        project_tags = load_project_tags(args.project_tags)
    tm = None
    if name in ("tm", "tm+mat"):
        stops = load_stopwords(args.stopwords) if args.stopwords else load_stopwords()
        tm = TmConfig(args.ratio, args.alpha, args.weighting, args.threshold, stops)
    return ClassifierSpec(name, strategy, tags, patterns, project_tags, tm)


def _display_name(name: str, spec: ClassifierSpec) -> str:
    if spec.name == "mat" and name == "mat":
        return f"mat-{spec.strategy.value}"
    return name


def _prediction_record(p: Prediction) -> dict:
    rec = {"project": p.project, "id": p.id, "label": p.label.value}
    if p.evidence:
        rec["evidence"] = list(p.evidence)
    return rec


def write_predictions(preds: Sequence[Prediction], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for p in preds:
            f.write(json.dumps(_prediction_record(p), sort_keys=True) + "\n")


def read_predictions(path) -> list[Prediction]:
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                r = json.loads(line)
                ev = tuple(r["evidence"]) if r.get("evidence") else None
                out.append(Prediction(r["project"], int(r["id"]), Label(r["label"]), ev))
            except (KeyError, ValueError) as e:
                raise CorpusError(f"{path}:{lineno}: bad prediction record ({e})") from None
    return out


# -- subcommands -------------------------------------------------------------

def cmd_import(args) -> int:
    mapping = LabelMapping.from_file(args.label_map) if args.label_map else LabelMapping()
    if args.comments or args.labels:
        if not (args.comments and args.labels):
            raise UsageError("--comments and --labels must be given together")
        corpora = {"_": import_benchmark(args.comments, args.labels, mapping, args.project)}
    elif args.dataset:
        corpora = import_benchmark_dir(args.dataset, mapping, args.comments_name, args.labels_name)
    else:
        raise UsageError("give a dataset directory or --comments/--labels")
    if not args.out:
        raise UsageError("--out is required")
    out = Path(args.out)
    if len(corpora) == 1 and out.suffix == ".jsonl":
        c = next(iter(corpora.values()))
        write_corpus(c, out)
    else:
        out.mkdir(parents=True, exist_ok=True)
        for name, c in corpora.items():
            write_corpus(c, out / f"{c.name}.jsonl")
    rows = [["project", "#comments", "#SATD", "%SATD"]]
    for c in corpora.values():
        n, k = len(c), c.n_satd()
        rows.append([c.name, str(n), str(k), f"{100 * k / n:.2f}%" if n else "n/a"])
    n = sum(len(c) for c in corpora.values())
    k = sum(c.n_satd() for c in corpora.values())
    rows.append(["Total", str(n), str(k), f"{100 * k / n:.2f}%" if n else "n/a"])
    sys.stderr.write(report.align(rows))
    return 0


def _scan_one(task):
    path, display, profile, project = task
    return scan_file(path, profile, display, project)


def cmd_scan(args) -> int:
    profile, fcfg = (load_config(args.config) if args.config else (JAVA, FilterConfig()))
    files: list[tuple[Path, str]] = []
    for raw in args.paths:
        p = Path(raw)
        if p.is_dir():
            for f in sorted(p.rglob("*")):
                if f.is_file() and f.suffix in profile.extensions:
                    files.append((f, f.relative_to(p).as_posix()))
        elif p.is_file():
            files.append((p, p.name))
        else:
            raise UsageError(f"{p}: no such file or directory")
    project = args.project or (Path(args.paths[0]).resolve().name if args.paths else "project")
    if not files:
        log.warning("no source files matching %s found", ", ".join(profile.extensions))
    per_file = pmap(_scan_one, [(f, d, profile, project) for f, d in files], args.parallelism)
    comments = [c for cs in per_file for c in cs]
    kept, dropped = apply_filters(comments, fcfg)
    renumbered = [
        Comment(project, i, c.text, c.kind, c.origin) for i, c in enumerate(kept, 1)
    ]
    corpus = Corpus(project, renumbered)
    if args.out:
        write_corpus(corpus, args.out)
    counts = {r: 0 for r in FILTER_RULES}
    for _, reason in dropped:
        counts[reason] += 1
    rows = [["files", str(len(files))], ["comments", str(len(comments))], ["kept", str(len(kept))]]
    rows += [[f"dropped:{r}", str(n)] for r, n in counts.items()]
    sys.stderr.write(report.align(rows))
    if not args.out:
        for c in corpus:
            sys.stdout.write(json.dumps({"id": c.id, "text": c.text}, ensure_ascii=False) + "\n")
    return 0


def _supervised_predictor(args, spec: ClassifierSpec):
    if args.model:
        return load_ensemble(args.model)
    if not args.train:
        raise UsageError(f"--classifier {spec.name} needs --model FILE or --train CORPUS...")
    sources = list(_load_corpora(args.train).values())
    ens = train_tm(sources, spec.tm)
    if args.save_model:
        save_ensemble(ens, args.save_model)
    return ens


def cmd_classify(args) -> int:
    spec = _spec(args, args.classifier)
    corpus = [c for cs in _load_corpora(args.corpus).values() for c in cs]
    if spec.supervised:
        ens = _supervised_predictor(args, spec)
        if spec.name == "tm+mat":
            preds = combine_with_mat(corpus, ens.predict, spec.tags)
        else:
            preds = [ens.predict(c) for c in corpus]
    else:
        preds = classify_corpus(corpus, spec)
    if args.out:
        write_predictions(preds, args.out)
    satd = [(c, p) for c, p in zip(corpus, preds) if p.is_satd]
    if args.format == "json":
        sys.stdout.write(report.to_json([_prediction_record(p) for p in preds]))
    elif args.format == "csv":
        rows = [["project", "id", "label", "rule", "token"]]
        rows += [[p.project, p.id, p.label.value, *(p.evidence or ("", ""))] for p in preds]
        sys.stdout.write(report._csv(rows))
    else:
        for c, p in satd:
            where = f"{c.origin.file}:{c.origin.start_line}" if c.origin else f"{c.project}#{c.id}"
            why = f" [{p.evidence[0]}]" if p.evidence else ""
            first = c.text.splitlines()[0] if c.text else ""
            sys.stdout.write(f"{where}: SATD{why} {first}\n")
        sys.stdout.write(f"{len(satd)} of {len(preds)} comments classified SATD\n")
    return 0


def cmd_evaluate(args) -> int:
    corpora = _load_corpora(args.corpus)
    if not corpora:
        raise UsageError("no corpora to evaluate")
    columns: dict[str, dict[str, Scores]] = {}
    for name in args.classifier or ["mat"]:
        spec = _spec(args, name)
        res = run_scenario(args.scenario, spec, corpora, args.parallelism)
        label = _display_name(name, spec)
        columns[label] = res.scores
        if args.save_predictions and res.predictions:
            d = Path(args.save_predictions)
            d.mkdir(parents=True, exist_ok=True)
            preds = [p for t in corpora for p in res.predictions[t]]
            write_predictions(preds, d / f"{label}.jsonl")
    _emit(report.scores_table(columns, args.format), args.out)
    return 0


def _scores_from_json(path) -> dict[str, dict[str, float]]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if len(doc) != 1:
        raise UsageError(f"{path}: expected exactly one classifier in the scores file")
    col = next(iter(doc.values()))
    ours = {p: dict(s) for p, s in col["projects"].items()}
    ours[AVERAGE] = dict(col["average"])
    return ours


def cmd_compare(args) -> int:
    published = load_published(args.published)
    if args.scores:
        ours = _scores_from_json(args.scores)
    elif args.ours_published:
        ours = published_as_ours(published, args.ours_published, args.scenario)
    elif args.corpus:
        spec = _spec(args, (args.classifier or ["mat"])[0])
        res = run_scenario(args.scenario, spec, _load_corpora(args.corpus), args.parallelism)
        ours = {p: s.as_dict() for p, s in res.scores.items()}
        ours[AVERAGE] = {i: a.value for i, a in average_scores(res.scores).items()}
    else:
        raise UsageError("give --scores FILE, --ours-published APPROACH, or corpora")
    others = args.against or [a for a in published.approaches() if a in ("Pattern", "NLP", "TM", "CNN")]
    indicators = args.indicator or list(INDICATORS)
    cells = compare_against_published(
        ours, published, others, args.scenario, indicators, args.include_average, args.method,
    )
    text = report.comparison_table(cells, args.format)
    if args.predictions:
        if not args.corpus:
            raise UsageError("--predictions needs the labeled corpora as positional arguments")
        gold = [c for cs in _load_corpora(args.corpus).values() for c in cs]
        preds = {}
        for item in args.predictions:
            name, sep, path = item.partition("=")
            if not sep:
                raise UsageError(f"--predictions expects NAME=FILE, got {item!r}")
            preds[name] = read_predictions(path)
        text += "\n" + report.overlap_table(overlap_analysis(preds, gold), args.format)
    _emit(text, args.out)
    return 0


# -- parser ------------------------------------------------------------------

def _add_classifier_opts(p, multi: bool = False):
    if multi:
        p.add_argument("--classifier", action="append", choices=CLASSIFIERS,
                       help="classifier to run (repeatable; default mat)")
    else:
        p.add_argument("--classifier", default="mat", choices=CLASSIFIERS)
    p.add_argument("--strategy", default="fuzzy", choices=("strict", "fuzzy"))
    p.add_argument("--tags", metavar="FILE", help="task tag file (default: todo, fixme, xxx, hack)")
    p.add_argument("--patterns", metavar="FILE", help="pattern file for --classifier pattern")
    p.add_argument("--project-tags", metavar="FILE", help="project-specific tags for mat-ext")
    p.add_argument("--stopwords", metavar="FILE")
    p.add_argument("--ratio", type=float, default=0.10, help="TM feature selection ratio")
    p.add_argument("--alpha", type=float, default=1.0, help="NBM smoothing constant")
    p.add_argument("--weighting", default="tfidf", choices=("tfidf", "counts"))
    p.add_argument("--threshold", type=int, help="TM vote threshold (default: majority)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="satdmat", description="Identify self-admitted technical debt in code comments.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("import", help="import the comments/labels benchmark")
    p.add_argument("dataset", nargs="?", help="directory with <project>/comments and <project>/labels")
    p.add_argument("--comments", metavar="FILE")
    p.add_argument("--labels", metavar="FILE")
    p.add_argument("--project")
    p.add_argument("--comments-name", default="comments")
    p.add_argument("--labels-name", default="labels")
    p.add_argument("--label-map", metavar="FILE")
    p.add_argument("--out", metavar="PATH", help="corpus file (.jsonl) or output directory")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("scan", help="extract and filter comments from source files")
    p.add_argument("paths", nargs="+")
    p.add_argument("--config", metavar="FILE", help="language profile / filter config")
    p.add_argument("--project")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--parallelism", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("classify", help="classify the comments of a corpus")
    p.add_argument("corpus", nargs="+")
    _add_classifier_opts(p)
    p.add_argument("--model", metavar="FILE", help="saved TM ensemble")
    p.add_argument("--train", nargs="+", metavar="CORPUS", help="labeled corpora to train TM on")
    p.add_argument("--save-model", metavar="FILE")
    p.add_argument("--format", default="text", choices=("text", "json", "csv"))
    p.add_argument("--out", metavar="PATH", help="write predictions (JSONL)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="score classifiers on labeled corpora")
    p.add_argument("corpus", nargs="+")
    _add_classifier_opts(p, multi=True)
    p.add_argument("--scenario", default="mto", choices=("mto", "oto"))
    p.add_argument("--format", default="text", choices=("text", "json", "csv"))
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--save-predictions", metavar="DIR")
    p.add_argument("--parallelism", type=int, default=1)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="compare against published scores")
    p.add_argument("corpus", nargs="*")
    _add_classifier_opts(p, multi=True)
    p.add_argument("--published", metavar="FILE", help="published scores CSV (default: bundled)")
    p.add_argument("--scores", metavar="FILE", help="our scores, JSON from evaluate")
    p.add_argument("--ours-published", metavar="APPROACH",
                   help="use a published column as our scores (e.g. MAT)")
    p.add_argument("--against", nargs="+", metavar="APPROACH")
    p.add_argument("--indicator", action="append", choices=INDICATORS)
    p.add_argument("--include-average", action="append", default=[], metavar="APPROACH",
                   help="append the Average row to both samples for this approach")
    p.add_argument("--method", default="auto", choices=("auto", "exact", "approx"))
    p.add_argument("--predictions", action="append", metavar="NAME=FILE",
                   help="prediction file for overlap analysis (repeatable)")
    p.add_argument("--scenario", default="mto", choices=("mto", "oto"))
    p.add_argument("--format", default="text", choices=("text", "json", "csv"))
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--parallelism", type=int, default=1)
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    if getattr(args, "parallelism", 1) < 1:
        sys.stderr.write("error: --parallelism must be positive\n")
        return 2
    try:
        return args.func(args)
    except (UsageError, CorpusError, ValueError, KeyError, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        sys.stderr.write(f"error: {msg}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
