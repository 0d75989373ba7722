"""Comment/corpus data model and its on-disk formats.

The canonical corpus file is JSON-Lines, one comment per line::

    {"project": "Ant", "id": 1, "text": "...", "kind": "line",
     "label": "SATD", "file": "src/A.java", "start_line": 3, "end_line": 5}

``label`` and the three origin keys are optional. Unknown keys are ignored.
The benchmark importer reads two parallel plain-text files instead: one
comment per line and one label per line.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional


class CorpusError(ValueError):
    """Malformed corpus input."""


class Label(str, enum.Enum):
    SATD = "SATD"
    NON_SATD = "NonSATD"


class Kind(str, enum.Enum):
    LINE = "line"
    BLOCK = "block"
    DOC = "doc"


@dataclass(frozen=True)
class Origin:
    file: str
    start_line: int
    end_line: int


@dataclass(frozen=True)
class Comment:
    project: str
    id: int
    text: str
    kind: Kind = Kind.LINE
    origin: Optional[Origin] = None
    gold_label: Optional[Label] = None

    def __post_init__(self):
        if not self.text.strip():
            raise CorpusError(f"{self.project}#{self.id}: empty comment text")


@dataclass(frozen=True)
class Corpus:
    name: str
    comments: tuple[Comment, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "comments", tuple(self.comments))
        seen = set()
        for c in self.comments:
            key = (c.project, c.id)
            if key in seen:
                raise CorpusError(f"duplicate comment id {c.project}#{c.id}")
            seen.add(key)

    @property
    def labeled(self) -> bool:
        return all(c.gold_label is not None for c in self.comments)

    def __len__(self) -> int:
        return len(self.comments)

    def __iter__(self) -> Iterator[Comment]:
        return iter(self.comments)

    def projects(self) -> list[str]:
        return list(dict.fromkeys(c.project for c in self.comments))

    def by_project(self) -> dict[str, "Corpus"]:
        groups: dict[str, list[Comment]] = {}
        for c in self.comments:
            groups.setdefault(c.project, []).append(c)
        return {p: Corpus(p, cs) for p, cs in groups.items()}

    def n_satd(self) -> int:
        return sum(c.gold_label is Label.SATD for c in self.comments)


@dataclass(frozen=True)
class LabelMapping:
    satd_strings: frozenset[str] = field(
        default_factory=lambda: frozenset({"positive", "SATD", "1"})
    )
    nonsatd_strings: frozenset[str] = field(
        default_factory=lambda: frozenset({"negative", "WITHOUT_CLASSIFICATION", "0"})
    )

    def __post_init__(self):
        if not self.satd_strings or not self.nonsatd_strings:
            raise ValueError("label mapping needs at least one string per class")
        overlap = self.satd_strings & self.nonsatd_strings
        if overlap:
            raise ValueError(f"label strings mapped to both classes: {sorted(overlap)}")

    def map(self, raw: str) -> Optional[Label]:
        raw = raw.strip()
        if raw in self.satd_strings:
            return Label.SATD
        if raw in self.nonsatd_strings:
            return Label.NON_SATD
        return None

    @classmethod
    def from_file(cls, path: str | Path) -> "LabelMapping":
        """Parse ``SATD = a, b`` / ``NonSATD = c, d`` lines."""
        sides: dict[str, frozenset[str]] = {}
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, value = line.partition("=")
                key = key.strip()
                if not sep or key not in ("SATD", "NonSATD"):
                    raise CorpusError(f"{path}:{lineno}: expected 'SATD = ...' or 'NonSATD = ...'")
                sides[key] = frozenset(v.strip() for v in value.split(",") if v.strip())
        return cls(sides.get("SATD", frozenset()), sides.get("NonSATD", frozenset()))


def comment_to_record(c: Comment) -> dict:
    rec = {"project": c.project, "id": c.id, "text": c.text, "kind": c.kind.value}
    if c.gold_label is not None:
        rec["label"] = c.gold_label.value
    if c.origin is not None:
        rec["file"] = c.origin.file
        rec["start_line"] = c.origin.start_line
        rec["end_line"] = c.origin.end_line
    return rec


def record_to_comment(rec: dict) -> Comment:
    try:
        label = rec.get("label")
        origin = None
        if rec.get("file") is not None:
            origin = Origin(rec["file"], int(rec["start_line"]), int(rec["end_line"]))
        return Comment(
            project=str(rec["project"]),
            id=int(rec["id"]),
            text=rec["text"],
            kind=Kind(rec.get("kind", "line")),
            origin=origin,
            gold_label=Label(label) if label is not None else None,
        )
    except KeyError as e:
        raise CorpusError(f"missing key {e.args[0]!r}") from None
    except ValueError as e:
        raise CorpusError(str(e)) from None


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for c in corpus.comments:
            f.write(json.dumps(comment_to_record(c), ensure_ascii=False))
            f.write("\n")


def read_corpus(path: str | Path, name: Optional[str] = None) -> Corpus:
    path = Path(path)
    comments = []
    with open(path, encoding="utf-8", newline="") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                if not isinstance(rec, dict):
                    raise CorpusError("record is not a JSON object")
                comments.append(record_to_comment(rec))
            except (json.JSONDecodeError, CorpusError) as e:
                raise CorpusError(f"{path}:{lineno}: {e}") from None
    labeled = [c.gold_label is not None for c in comments]
    if any(labeled) and not all(labeled):
        c = comments[labeled.index(False)]
        raise CorpusError(f"{path}: missing label on record {c.project}#{c.id}")
    try:
        return Corpus(name or path.stem, comments)
    except CorpusError as e:
        raise CorpusError(f"{path}: {e}") from None


def _read_lines(path: Path) -> list[str]:
    # Only \n separates records; a lone \r inside a comment is text.
    with open(path, encoding="utf-8", newline="") as f:
        data = f.read()
    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [ln[:-1] if ln.endswith("\r") else ln for ln in lines]


def import_benchmark(
    comments_path: str | Path,
    labels_path: str | Path,
    mapping: Optional[LabelMapping] = None,
    project: Optional[str] = None,
) -> Corpus:
    """Pair line k of the comments file with line k of the labels file."""
    mapping = mapping or LabelMapping()
    comments_path, labels_path = Path(comments_path), Path(labels_path)
    project = project or comments_path.parent.name
    texts = _read_lines(comments_path)
    labels = _read_lines(labels_path)
    if len(texts) != len(labels):
        raise CorpusError(
            f"line-count mismatch: {comments_path} has {len(texts)} lines, "
            f"{labels_path} has {len(labels)}"
        )
    comments = []
    for i, (text, raw) in enumerate(zip(texts, labels), 1):
        label = mapping.map(raw)
        if label is None:
            raise CorpusError(f"{labels_path}:{i}: unknown label {raw.strip()!r}")
        try:
            comments.append(Comment(project, i, text, Kind.LINE, None, label))
        except CorpusError as e:
            raise CorpusError(f"{comments_path}:{i}: {e}") from None
    return Corpus(project, comments)


# Canonical names of the ten benchmark projects.
BENCHMARK_PROJECTS = (
    "Ant", "ArgoUML", "Columba", "EMF", "Hibernate",
    "JEdit", "JFreeChart", "JMeter", "JRuby", "Squirrel",
)

_ALIASES = {"sql": "Squirrel", "squirrel": "Squirrel"}


def canonical_project(name: str) -> str:
    """Map a dataset directory name such as ``apache-ant-1.7.0`` to ``Ant``."""
    low = name.lower()
    for proj in sorted(BENCHMARK_PROJECTS, key=len, reverse=True):
        if proj.lower() in low:
            return proj
    for alias, proj in _ALIASES.items():
        if low.startswith(alias):
            return proj
    return name


def import_benchmark_dir(
    root: str | Path,
    mapping: Optional[LabelMapping] = None,
    comments_name: str = "comments",
    labels_name: str = "labels",
) -> dict[str, Corpus]:
    """Import every ``<root>/<project>/{comments,labels}`` pair, sorted by name."""
    root = Path(root)
    found = {}
    for cpath in sorted(root.rglob(comments_name)):
        lpath = cpath.with_name(labels_name)
        if not cpath.is_file() or not lpath.is_file():
            continue
        proj = canonical_project(cpath.parent.name)
        if proj in found:
            raise CorpusError(f"two benchmark directories map to project {proj}")
        found[proj] = import_benchmark(cpath, lpath, mapping, proj)
    if not found:
        raise CorpusError(f"no '{comments_name}'/'{labels_name}' pairs under {root}")
    return found


def merge(corpora: Iterable[Corpus], name: str = "merged") -> Corpus:
    comments: list[Comment] = []
    for c in corpora:
        comments.extend(c.comments)
    return Corpus(name, comments)
