"""Tokenization, stemming and stop-word removal."""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path
from typing import Iterable

from .porter import porter_stem

# ASCII letters only; anything else, including accented letters, splits.
_WORD = re.compile(r"[A-Za-z]+")


def tokenize(text: str) -> list[str]:
    return [m.group(0).lower() for m in _WORD.finditer(text)]


def stem(token: str) -> str:
    return porter_stem(token)


def preprocess(text: str) -> list[str]:
    """Tokenize then stem, the normalisation every matcher works in."""
    return [porter_stem(t) for t in tokenize(text)]


def remove_stopwords(tokens: Iterable[str], stops: frozenset[str]) -> list[str]:
    return [t for t in tokens if t not in stops]


def read_word_list(path: str | Path) -> list[str]:
    """Read a one-entry-per-line file; ``#`` starts a comment line."""
    entries = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                entries.append(line)
    return entries


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    if path is None:
        path = resources.files("satdmat") / "data" / "stopwords.txt"
    words = [w.lower() for w in read_word_list(path)]
    for w in words:
        if not w.isascii() or not w.isalpha():
            raise ValueError(f"stop word {w!r} is not alphabetic")
    return frozenset(words)
