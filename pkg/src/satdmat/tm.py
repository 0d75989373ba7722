"""Supervised text-mining comparator and the TM+MAT combination.

One multinomial naive Bayes sub-model is trained per source project on
information-gain-selected features weighted by TF-IDF; the sub-models vote
on each target comment. Everything here is deterministic.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from .corpus import Comment, Corpus, Label
from .matchers import Prediction, Strategy, TagSet, find_tag
from .porter import porter_stem
from .textprep import load_stopwords, preprocess, tokenize

_LABELS = (Label.NON_SATD, Label.SATD)


@dataclass(frozen=True)
class TmConfig:
    ratio: float = 0.10
    alpha: float = 1.0
    # "tfidf" feeds TF-IDF weights to NBM; "counts" feeds raw term counts.
    weighting: str = "tfidf"
    threshold: Optional[int] = None
    stopwords: frozenset[str] = field(default_factory=load_stopwords)

    def __post_init__(self):
        if not 0 < self.ratio <= 1:
            raise ValueError(f"selection ratio must be in (0, 1], got {self.ratio}")
        if self.alpha <= 0:
            raise ValueError("smoothing constant must be positive")
        if self.weighting not in ("tfidf", "counts"):
            raise ValueError(f"unknown weighting {self.weighting!r}")


def features_of(text: str, stops: frozenset[str]) -> list[str]:
    """Tokenize, drop stop words, stem."""
    return [porter_stem(t) for t in tokenize(text) if t not in stops]


def _entropy(pos: float, total: float) -> float:
    if total <= 0 or pos <= 0 or pos >= total:
        return 0.0
    p = pos / total
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


def information_gain(df_pos: int, df: int, n_pos: int, n: int) -> float:
    """IG of term presence for a binary label.

    ``df`` documents contain the term, ``df_pos`` of them positive; the
    corpus has ``n`` documents, ``n_pos`` positive.
    """
    h = _entropy(n_pos, n)
    absent, absent_pos = n - df, n_pos - df_pos
    cond = (df / n) * _entropy(df_pos, df) + (absent / n) * _entropy(absent_pos, absent)
    return max(0.0, h - cond)


@dataclass(frozen=True)
class FeatureVocabulary:
    features: tuple[str, ...]
    ig_scores: tuple[float, ...]
    idf: tuple[float, ...]
    selection_ratio: float
    n_candidates: int
    n_docs: int

    @property
    def index(self) -> dict[str, int]:
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {f: i for i, f in enumerate(self.features)}
            object.__setattr__(self, "_index", idx)
        return idx


def smoothed_idf(df: int, n_docs: int) -> float:
    return math.log((1 + n_docs) / (1 + df)) + 1.0


def _doc_labels(docs: Sequence[Sequence[str]], labels: Sequence[Label]):
    if len(docs) != len(labels):
        raise ValueError("documents and labels differ in length")
    present = {l for l in labels}
    if len(present) < 2:
        only = next(iter(present)).value if present else "none"
        raise ValueError(f"training data has a single class ({only}); need SATD and NonSATD")


def build_vocabulary(
    docs: Sequence[Sequence[str]], labels: Sequence[Label], ratio: float = 0.10
) -> FeatureVocabulary:
    """Select the top ``ceil(ratio * N)`` features by information gain."""
    if not 0 < ratio <= 1:
        raise ValueError(f"selection ratio must be in (0, 1], got {ratio}")
    _doc_labels(docs, labels)
    n = len(docs)
    n_pos = sum(l is Label.SATD for l in labels)
    df: Counter = Counter()
    df_pos: Counter = Counter()
    for toks, lab in zip(docs, labels):
        uniq = set(toks)
        df.update(uniq)
        if lab is Label.SATD:
            df_pos.update(uniq)
    scored = sorted(
        ((information_gain(df_pos[f], df[f], n_pos, n), f) for f in df),
        key=lambda t: (-t[0], t[1]),
    )
    k = math.ceil(ratio * len(scored) - 1e-9)
    chosen = scored[:k]
    return FeatureVocabulary(
        features=tuple(f for _, f in chosen),
        ig_scores=tuple(s for s, _ in chosen),
        idf=tuple(smoothed_idf(df[f], n) for _, f in chosen),
        selection_ratio=ratio,
        n_candidates=len(scored),
        n_docs=n,
    )


def vectorize(tokens: Iterable[str], vocab: FeatureVocabulary, weighting: str = "tfidf") -> dict[str, float]:
    """Sparse feature -> weight map; out-of-vocabulary tokens are ignored."""
    idx = vocab.index
    tf = Counter(t for t in tokens if t in idx)
    if weighting == "counts":
        return {f: float(c) for f, c in tf.items()}
    return {f: c * vocab.idf[idx[f]] for f, c in tf.items()}


@dataclass(frozen=True)
class NbmModel:
    vocabulary: FeatureVocabulary
    log_prior: dict  # Label -> float
    log_cond: dict  # Label -> tuple of per-feature log P(f | class)
    alpha: float
    weighting: str
    stopwords: frozenset[str] = frozenset()

    @property
    def priors(self) -> dict:
        return {l: math.exp(v) for l, v in self.log_prior.items()}

    def log_posteriors(self, tokens: Sequence[str]) -> dict:
        vec = vectorize(tokens, self.vocabulary, self.weighting)
        idx = self.vocabulary.index
        return {
            l: self.log_prior[l] + sum(w * self.log_cond[l][idx[f]] for f, w in vec.items())
            for l in _LABELS
        }

    def predict_tokens(self, tokens: Sequence[str]) -> Label:
        post = self.log_posteriors(tokens)
        # exact ties go to NonSATD
        return Label.SATD if post[Label.SATD] > post[Label.NON_SATD] else Label.NON_SATD

    def predict(self, comment: Comment) -> Prediction:
        return predict_nbm(self, comment)


def train_nbm(
    docs: Sequence[Sequence[str]],
    labels: Sequence[Label],
    vocab: FeatureVocabulary,
    alpha: float = 1.0,
    weighting: str = "tfidf",
    stopwords: frozenset[str] = frozenset(),
) -> NbmModel:
    _doc_labels(docs, labels)
    if alpha <= 0:
        raise ValueError("smoothing constant must be positive")
    n_feat = len(vocab.features)
    sums = {l: [0.0] * n_feat for l in _LABELS}
    counts = Counter(labels)
    idx = vocab.index
    for toks, lab in zip(docs, labels):
        row = sums[lab]
        for f, w in vectorize(toks, vocab, weighting).items():
            row[idx[f]] += w
    n = len(labels)
    log_prior = {l: math.log(counts[l] / n) for l in _LABELS}
    log_cond = {}
    for l in _LABELS:
        denom = sum(sums[l]) + alpha * n_feat
        log_cond[l] = tuple(math.log((s + alpha) / denom) for s in sums[l])
    return NbmModel(vocab, log_prior, log_cond, alpha, weighting, stopwords)


def predict_nbm(model: NbmModel, comment: Comment) -> Prediction:
    label = model.predict_tokens(features_of(comment.text, model.stopwords))
    return Prediction(comment.project, comment.id, label)


def train_project_model(corpus: Corpus, config: Optional[TmConfig] = None) -> NbmModel:
    cfg = config or TmConfig()
    if not corpus.labeled:
        raise ValueError(f"corpus {corpus.name} is not labeled")
    docs = [features_of(c.text, cfg.stopwords) for c in corpus]
    labels = [c.gold_label for c in corpus]
    try:
        vocab = build_vocabulary(docs, labels, cfg.ratio)
    except ValueError as e:
        raise ValueError(f"{corpus.name}: {e}") from None
    return train_nbm(docs, labels, vocab, cfg.alpha, cfg.weighting, cfg.stopwords)


@dataclass(frozen=True)
class VotingEnsemble:
    sub_models: tuple[NbmModel, ...]
    threshold: int
    sources: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.sub_models:
            raise ValueError("ensemble needs at least one sub-model")
        if not 1 <= self.threshold <= len(self.sub_models):
            raise ValueError(f"vote threshold {self.threshold} outside 1..{len(self.sub_models)}")

    def predict(self, comment: Comment) -> Prediction:
        return predict_vote(self, comment)


def majority(n: int) -> int:
    return n // 2 + 1


def predict_vote(ensemble: VotingEnsemble, comment: Comment) -> Prediction:
    cache: dict[frozenset, list[str]] = {}
    votes = 0
    for m in ensemble.sub_models:
        toks = cache.get(m.stopwords)
        if toks is None:
            toks = cache[m.stopwords] = features_of(comment.text, m.stopwords)
        votes += m.predict_tokens(toks) is Label.SATD
    label = Label.SATD if votes >= ensemble.threshold else Label.NON_SATD
    return Prediction(comment.project, comment.id, label)


def train_tm(sources: Sequence[Corpus], config: Optional[TmConfig] = None) -> VotingEnsemble:
    """One sub-model per source corpus, combined by vote."""
    cfg = config or TmConfig()
    models = tuple(train_project_model(c, cfg) for c in sources)
    threshold = cfg.threshold if cfg.threshold is not None else majority(len(models))
    return VotingEnsemble(models, threshold, tuple(c.name for c in sources))


def combine_with_mat(
    corpus: Iterable[Comment],
    supervised: Callable[[Comment], Prediction],
    tags: Optional[TagSet] = None,
) -> list[Prediction]:
    """Tagged comments are SATD; the rest get the supervised prediction."""
    tags = tags or TagSet.default()
    out = []
    for c in corpus:
        hit = find_tag(preprocess(c.text), tags, Strategy.FUZZY)
        if hit is not None:
            out.append(Prediction(c.project, c.id, Label.SATD, hit))
        else:
            out.append(supervised(c))
    return out


# -- serialization -----------------------------------------------------------

def _model_to_dict(m: NbmModel) -> dict:
    v = m.vocabulary
    return {
        "vocabulary": {
            "features": list(v.features),
            "ig_scores": list(v.ig_scores),
            "idf": list(v.idf),
            "selection_ratio": v.selection_ratio,
            "n_candidates": v.n_candidates,
            "n_docs": v.n_docs,
        },
        "log_prior": {l.value: m.log_prior[l] for l in _LABELS},
        "log_cond": {l.value: list(m.log_cond[l]) for l in _LABELS},
        "alpha": m.alpha,
        "weighting": m.weighting,
        "stopwords": sorted(m.stopwords),
    }


def _model_from_dict(d: dict) -> NbmModel:
    v = d["vocabulary"]
    vocab = FeatureVocabulary(
        tuple(v["features"]), tuple(v["ig_scores"]), tuple(v["idf"]),
        v["selection_ratio"], v["n_candidates"], v["n_docs"],
    )
    return NbmModel(
        vocab,
        {Label(k): val for k, val in d["log_prior"].items()},
        {Label(k): tuple(val) for k, val in d["log_cond"].items()},
        d["alpha"],
        d["weighting"],
        frozenset(d.get("stopwords", ())),
    )


def save_ensemble(ensemble: VotingEnsemble, path: str | Path) -> None:
    doc = {
        "format": "satdmat-tm-ensemble",
        "version": 1,
        "threshold": ensemble.threshold,
        "sources": list(ensemble.sources),
        "sub_models": [_model_to_dict(m) for m in ensemble.sub_models],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, sort_keys=True)


def load_ensemble(path: str | Path) -> VotingEnsemble:
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    if doc.get("format") != "satdmat-tm-ensemble":
        raise ValueError(f"{path} is not a saved TM ensemble")
    return VotingEnsemble(
        tuple(_model_from_dict(d) for d in doc["sub_models"]),
        doc["threshold"],
        tuple(doc.get("sources", ())),
    )
