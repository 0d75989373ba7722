"""Cross-project evaluation scenarios.

MTO: each project is the target once; supervised classifiers learn from
the other projects (TM: one sub-model per source, majority vote).
OTO: supervised classifiers learn from one source at a time and the target
score is the mean of the per-source scores. Unsupervised classifiers ignore
the sources, so both scenarios give them identical results.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from ..corpus import Corpus
from ..matchers import ClassifierSpec, Prediction, classify_corpus
from ..tm import NbmModel, TmConfig, VotingEnsemble, combine_with_mat, majority, train_project_model
from .metrics import ConfusionMatrix, Scores, average_scores, confusion, macro_average, scores


def pmap(fn: Callable, items: Sequence, parallelism: int = 1) -> list:
    """Order-preserving map, optionally over worker processes."""
    if parallelism <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=parallelism) as ex:
        return list(ex.map(fn, items))


@dataclass
class ScenarioResult:
    scenario: str
    classifier: str
    scores: dict[str, Scores] = field(default_factory=dict)
    confusion: dict[str, ConfusionMatrix] = field(default_factory=dict)
    predictions: dict[str, list[Prediction]] = field(default_factory=dict)
    # OTO only: per-target list of (source, Scores)
    runs: dict[str, list[tuple[str, Scores]]] = field(default_factory=dict)

    def averages(self):
        return average_scores(self.scores)


def _check(corpora: Mapping[str, Corpus], spec: ClassifierSpec):
    for name, c in corpora.items():
        if not c.labeled:
            raise ValueError(f"corpus {name} is not labeled")
    if spec.supervised and len(corpora) < 2:
        raise ValueError("supervised evaluation needs at least two corpora")


def _train(args) -> NbmModel:
    corpus, cfg = args
    try:
        return train_project_model(corpus, cfg)
    except ValueError as e:
        raise ValueError(f"training on {corpus.name}: {e}") from None


def _predict(args) -> list[Prediction]:
    spec, target, models = args
    if not spec.supervised:
        return classify_corpus(target, spec)
    ens = VotingEnsemble(tuple(models), _threshold(spec, len(models)))
    if spec.name == "tm+mat":
        return combine_with_mat(target, ens.predict, spec.tags)
    return [ens.predict(c) for c in target]


def _threshold(spec: ClassifierSpec, n: int) -> int:
    cfg = spec.tm or TmConfig()
    return min(cfg.threshold, n) if cfg.threshold is not None else majority(n)


def _models(spec: ClassifierSpec, corpora: Mapping[str, Corpus], parallelism: int) -> dict:
    if not spec.supervised:
        return {}
    cfg = spec.tm or TmConfig()
    names = list(corpora)
    trained = pmap(_train, [(corpora[n], cfg) for n in names], parallelism)
    return dict(zip(names, trained))


def run_mto(
    spec: ClassifierSpec, corpora: Mapping[str, Corpus], parallelism: int = 1
) -> ScenarioResult:
    _check(corpora, spec)
    models = _models(spec, corpora, parallelism)
    names = list(corpora)
    tasks = [
        (spec, corpora[t], [models[s] for s in names if s != t] if models else [])
        for t in names
    ]
    preds = pmap(_predict, tasks, parallelism)
    res = ScenarioResult("mto", spec.name)
    for t, p in zip(names, preds):
        cm = confusion(p, corpora[t].comments)
        res.predictions[t] = p
        res.confusion[t] = cm
        res.scores[t] = scores(cm)
    return res


def run_oto(
    spec: ClassifierSpec, corpora: Mapping[str, Corpus], parallelism: int = 1
) -> ScenarioResult:
    _check(corpora, spec)
    if not spec.supervised:
        res = run_mto(spec, corpora, parallelism)
        res.scenario = "oto"
        return res
    models = _models(spec, corpora, parallelism)
    names = list(corpora)
    pairs = [(t, s) for t in names for s in names if s != t]
    preds = pmap(_predict, [(spec, corpora[t], [models[s]]) for t, s in pairs], parallelism)
    res = ScenarioResult("oto", spec.name)
    for (t, s), p in zip(pairs, preds):
        res.runs.setdefault(t, []).append((s, scores(confusion(p, corpora[t].comments))))
    for t in names:
        runs = [sc for _, sc in res.runs[t]]
        res.scores[t] = Scores(
            *(macro_average(r.get(ind) for r in runs).value for ind in ("precision", "recall", "f1"))
        )
    return res


def run_scenario(
    scenario: str, spec: ClassifierSpec, corpora: Mapping[str, Corpus], parallelism: int = 1
) -> ScenarioResult:
    if scenario == "mto":
        return run_mto(spec, corpora, parallelism)
    if scenario == "oto":
        return run_oto(spec, corpora, parallelism)
    raise ValueError(f"unknown scenario {scenario!r}")
