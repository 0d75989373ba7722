"""Detect self-admitted technical debt (SATD) in source code comments.

The main classifier, MAT, flags a comment as SATD when it contains one of
the task tags todo, fixme, xxx or hack. A keyword-pattern baseline, a
naive Bayes text-mining comparator and an evaluation harness come with it.
"""

__version__ = "0.1.0"

from .corpus import Comment, Corpus, CorpusError, Kind, Label, LabelMapping, Origin, read_corpus, write_corpus
from .matchers import (
    ClassifierSpec, PatternSet, Prediction, Strategy, TagSet, classify_corpus, classify_mat,
    classify_pattern,
)
from .textprep import preprocess, stem, tokenize

__all__ = [
    "Comment", "Corpus", "CorpusError", "Kind", "Label", "LabelMapping", "Origin",
    "read_corpus", "write_corpus", "ClassifierSpec", "PatternSet", "Prediction", "Strategy",
    "TagSet", "classify_corpus", "classify_mat", "classify_pattern", "preprocess", "stem",
    "tokenize",
]
