"""Unsupervised SATD classifiers: task-tag matching (MAT) and keyword patterns.

A comment is SATD under MAT when some token of its preprocessed text
matches a task tag. Strict matching needs equality; fuzzy matching accepts
a tag at the start or end of a token, which recovers run-together words
such as ``pleasefixme`` or ``hackhere``. Tags go through the same stemmer
as tokens, so ``fixme`` is matched as ``fixm`` on both sides.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .corpus import Comment, Corpus, Label
from .porter import porter_stem
from .textprep import preprocess, read_word_list

DEFAULT_TAGS = ("todo", "fixme", "xxx", "hack")


class Strategy(str, enum.Enum):
    STRICT = "strict"
    FUZZY = "fuzzy"


@dataclass(frozen=True)
class Prediction:
    project: str
    id: int
    label: Label
    evidence: Optional[tuple[str, str]] = None  # (rule, token that fired)

    @property
    def is_satd(self) -> bool:
        return self.label is Label.SATD


def _check_tag(tag: str) -> str:
    t = tag.strip().lower()
    if not t.isascii() or not t.isalpha():
        raise ValueError(f"task tag {tag!r} must contain only letters")
    if len(t) < 2:
        raise ValueError(f"task tag {tag!r} is shorter than two letters")
    return t


@dataclass(frozen=True)
class TagSet:
    """Ordered task tags; ``stems`` is what tokens are matched against."""

    tags: tuple[str, ...]
    source: str = "default"
    stems: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tags = tuple(dict.fromkeys(_check_tag(t) for t in self.tags))
        object.__setattr__(self, "tags", tags)
        object.__setattr__(self, "stems", tuple(porter_stem(t) for t in tags))

    @classmethod
    def default(cls) -> "TagSet":
        return cls(DEFAULT_TAGS, "default")

    @classmethod
    def from_file(cls, path: str | Path) -> "TagSet":
        tags = read_word_list(path)
        source = "default" if tuple(t.lower() for t in tags) == DEFAULT_TAGS else "extended"
        return cls(tuple(tags), source)

    def extend(self, project_tags: Iterable[str]) -> "TagSet":
        return extend_tags(self, project_tags)

    def __iter__(self):
        return iter(self.tags)

    def __len__(self):
        return len(self.tags)


def extend_tags(base: TagSet, project_tags: Iterable[str]) -> TagSet:
    extra = [_check_tag(t) for t in project_tags]
    if not extra:
        return base
    return TagSet(base.tags + tuple(extra), "extended")


@dataclass(frozen=True)
class PatternSet:
    """Keyword/phrase patterns, kept both raw and as stemmed token tuples."""

    patterns: tuple[str, ...]
    token_patterns: tuple[tuple[str, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pats = tuple(dict.fromkeys(" ".join(p.lower().split()) for p in self.patterns if p.strip()))
        object.__setattr__(self, "patterns", pats)
        toks = tuple(tuple(preprocess(p)) for p in pats)
        object.__setattr__(self, "token_patterns", tuple(t for t in toks if t))

    @classmethod
    def from_file(cls, path: str | Path) -> "PatternSet":
        return cls(tuple(read_word_list(path)))

    @classmethod
    def bundled(cls) -> "PatternSet":
        return cls.from_file(resources.files("satdmat") / "data" / "patterns.txt")


def match_tag(token: str, tag: str, strategy: Strategy = Strategy.FUZZY) -> bool:
    if strategy is Strategy.STRICT:
        return token == tag
    return token.startswith(tag) or token.endswith(tag)


def find_tag(
    tokens: Sequence[str], tags: TagSet, strategy: Strategy = Strategy.FUZZY
) -> Optional[tuple[str, str]]:
    """First (tag, token) match in token order, then tag order."""
    for tok in tokens:
        for tag, tag_stem in zip(tags.tags, tags.stems):
            if match_tag(tok, tag_stem, strategy):
                return tag, tok
    return None


def classify_mat(
    comment: Comment, tags: Optional[TagSet] = None, strategy: Strategy = Strategy.FUZZY
) -> Prediction:
    hit = find_tag(preprocess(comment.text), tags or TagSet.default(), Strategy(strategy))
    if hit is None:
        return Prediction(comment.project, comment.id, Label.NON_SATD)
    return Prediction(comment.project, comment.id, Label.SATD, hit)


def find_pattern(tokens: Sequence[str], patterns: PatternSet) -> Optional[tuple[str, str]]:
    n = len(tokens)
    for raw, pat in zip(patterns.patterns, patterns.token_patterns):
        k = len(pat)
        for i in range(n - k + 1):
            if tuple(tokens[i:i + k]) == pat:
                return raw, " ".join(pat)
    return None


def classify_pattern(comment: Comment, patterns: PatternSet) -> Prediction:
    if not patterns.token_patterns:
        raise ValueError("pattern classifier needs at least one pattern")
    hit = find_pattern(preprocess(comment.text), patterns)
    if hit is None:
        return Prediction(comment.project, comment.id, Label.NON_SATD)
    return Prediction(comment.project, comment.id, Label.SATD, hit)


def load_project_tags(path: str | Path | None = None) -> dict[str, tuple[str, ...]]:
    """Parse ``Project: tag, tag`` lines into a mapping."""
    if path is None:
        path = resources.files("satdmat") / "data" / "project_tags.txt"
    out: dict[str, tuple[str, ...]] = {}
    for line in read_word_list(path):
        proj, sep, rest = line.partition(":")
        if not sep:
            raise ValueError(f"{path}: expected 'project: tags', got {line!r}")
        out[proj.strip()] = tuple(_check_tag(t) for t in rest.split(",") if t.strip())
    return out


UNSUPERVISED = ("mat", "mat-ext", "pattern")


@dataclass(frozen=True)
class ClassifierSpec:
    """Which classifier to run and with what configuration.

    ``name`` is one of mat, mat-ext, pattern, tm, tm+mat. ``project_tags``
    is only consulted by mat-ext; ``tm`` carries TM hyperparameters.
    """

    name: str = "mat"
    strategy: Strategy = Strategy.FUZZY
    tags: TagSet = field(default_factory=TagSet.default)
    patterns: Optional[PatternSet] = None
    project_tags: Optional[dict] = None
    tm: Optional[object] = None

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.name not in UNSUPERVISED + ("tm", "tm+mat"):
            raise ValueError(f"unknown classifier {self.name!r}")
        if self.name == "pattern" and self.patterns is None:
            raise ValueError("pattern classifier needs a pattern file")
        if self.name == "mat-ext" and self.project_tags is None:
            raise ValueError("mat-ext needs project-specific tags")

    @property
    def supervised(self) -> bool:
        return self.name not in UNSUPERVISED

    def tags_for(self, project: str) -> TagSet:
        if self.name != "mat-ext":
            return self.tags
        lookup = {k.lower(): v for k, v in self.project_tags.items()}
        return self.tags.extend(lookup.get(project.lower(), ()))


def classify_comment(comment: Comment, spec: ClassifierSpec) -> Prediction:
    if spec.name == "pattern":
        return classify_pattern(comment, spec.patterns)
    if spec.name in ("mat", "mat-ext"):
        return classify_mat(comment, spec.tags_for(comment.project), spec.strategy)
    raise ValueError(f"{spec.name} is supervised; use satdmat.tm")


def classify_corpus(corpus: Corpus | Iterable[Comment], spec: ClassifierSpec) -> list[Prediction]:
    return [classify_comment(c, spec) for c in corpus]
