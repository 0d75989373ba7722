"""Comment extraction from source text and the pre-classification filters.

Filters run in a fixed order so the recorded drop reason is deterministic:
license, commented-out code, IDE-generated text, then doc comments without
a task tag. Grouping of consecutive line comments happens before filtering.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .corpus import Comment, Kind, Origin
from .matchers import TagSet, classify_mat
from .textprep import tokenize

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LanguageProfile:
    line_prefixes: tuple[str, ...] = ("//",)
    block_delimiters: tuple[tuple[str, str], ...] = (("/*", "*/"),)
    doc_delimiters: tuple[tuple[str, str], ...] = (("/**", "*/"),)
    string_quotes: tuple[str, ...] = ('"', "'")
    escape: str = "\\"
    extensions: tuple[str, ...] = (".java",)

    def __post_init__(self):
        for pre in self.line_prefixes:
            if not pre:
                raise ValueError("empty line-comment prefix")
        for o, c in self.block_delimiters + self.doc_delimiters:
            if not o or not c:
                raise ValueError("empty block delimiter")


JAVA = LanguageProfile()


@dataclass(frozen=True)
class FilterConfig:
    license_keywords: frozenset[str] = frozenset(
        {"license", "copyright", "redistribution", "warranty", "gnu", "apache"}
    )
    license_min_keywords: int = 2
    license_enabled: bool = True
    code_enabled: bool = True
    code_line_ratio: float = 0.5
    ide_generated_texts: frozenset[str] = frozenset(
        {
            "auto-generated method stub",
            "auto-generated catch block",
            "auto-generated constructor stub",
            "todo auto-generated method stub",
            "todo auto-generated catch block",
            "todo auto-generated constructor stub",
        }
    )
    doc_tags: TagSet = field(default_factory=TagSet.default)

    def __post_init__(self):
        if self.license_enabled and not self.license_keywords:
            raise ValueError("license filter enabled with no keywords")


class _Scanner:
    def __init__(self, text: str, profile: LanguageProfile, path: str):
        self.text = text
        self.p = profile
        self.path = path
        self.warnings: list[str] = []
        # Longest opener wins; doc openers are tried before their block prefix.
        openers = [(o, c, Kind.DOC) for o, c in profile.doc_delimiters]
        openers += [(o, c, Kind.BLOCK) for o, c in profile.block_delimiters]
        openers += [(o, None, Kind.LINE) for o in profile.line_prefixes]
        self.openers = sorted(openers, key=lambda t: -len(t[0]))
        self.block_openers = {o: c for o, c in profile.block_delimiters}
        self.line_starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                self.line_starts.append(i + 1)

    def line_of(self, pos: int) -> int:
        lo, hi = 0, len(self.line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.line_starts[mid] <= pos:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1

    def _skip_string(self, i: int, quote: str) -> int:
        text, n = self.text, len(self.text)
        j = i + len(quote)
        while j < n:
            if self.p.escape and text.startswith(self.p.escape, j):
                j += len(self.p.escape) + 1
                continue
            if text.startswith(quote, j):
                return j + len(quote)
            if text[j] == "\n":
                # unterminated literal ends at the line break
                return j
            j += 1
        return n

    def scan(self) -> list[tuple[Kind, int, int, str]]:
        text, n = self.text, len(self.text)
        found = []
        i = 0
        while i < n:
            quote = next((q for q in self.p.string_quotes if text.startswith(q, i)), None)
            if quote is not None:
                i = self._skip_string(i, quote)
                continue
            hit = next((t for t in self.openers if text.startswith(t[0], i)), None)
            if hit is None:
                i += 1
                continue
            opener, closer, kind = hit
            if kind is Kind.LINE:
                end = text.find("\n", i)
                end = n if end == -1 else end
                found.append((kind, i, end, text[i + len(opener):end]))
                i = end
                continue
            body_start = i + len(opener)
            close = text.find(closer, body_start)
            if kind is Kind.DOC:
                # "/**/" is an empty block comment, not a doc comment
                for bo, bc in self.block_openers.items():
                    if opener.startswith(bo) and text.find(bc, i + len(bo)) in range(i + len(bo), body_start):
                        kind, opener, closer = Kind.BLOCK, bo, bc
                        body_start = i + len(bo)
                        close = text.find(closer, body_start)
                        break
            if close == -1:
                self.warnings.append(
                    f"{self.path}:{self.line_of(i)}: unterminated block comment"
                )
                found.append((kind, i, n, text[body_start:]))
                i = n
            else:
                found.append((kind, i, close + len(closer), text[body_start:close]))
                i = close + len(closer)
        return found


def extract_comments(
    source: str | bytes,
    profile: LanguageProfile = JAVA,
    path: str = "<string>",
    project: str = "",
    first_id: int = 1,
) -> list[Comment]:
    """Lex ``source`` and return its non-empty comments in file order."""
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError:
            log.warning("%s: not valid UTF-8, decoding lossily", path)
            source = source.decode("utf-8", errors="replace")
    scanner = _Scanner(source, profile, path)
    out = []
    next_id = first_id
    for kind, start, end, body in scanner.scan():
        body = body.strip()
        if not body:
            continue
        # end is exclusive; a line comment stops before its newline
        origin = Origin(path, scanner.line_of(start), scanner.line_of(max(start, end - 1)))
        out.append(Comment(project, next_id, body, kind, origin))
        next_id += 1
    for w in scanner.warnings:
        log.warning(w)
    return out


def group_consecutive(comments: list[Comment]) -> list[Comment]:
    """Merge runs of line comments on consecutive lines into one comment."""
    out: list[Comment] = []
    run: list[Comment] = []

    def flush():
        if not run:
            return
        if len(run) == 1:
            out.append(run[0])
        else:
            first, last = run[0], run[-1]
            origin = None
            if first.origin is not None:
                origin = Origin(first.origin.file, first.origin.start_line, last.origin.end_line)
            out.append(replace(first, text="\n".join(c.text for c in run), origin=origin))
        run.clear()

    for c in comments:
        if c.kind is Kind.LINE and c.origin is not None:
            if run and c.origin.start_line == run[-1].origin.end_line + 1:
                run.append(c)
                continue
            flush()
            run.append(c)
        else:
            flush()
            out.append(c)
    flush()
    return out


_CODE_END = (";", "{", "}")
_ASSIGN = re.compile(r"^[A-Za-z_][\w.\[\]<>]*(\s+[A-Za-z_]\w*)?\s*[-+*/]?=(?!=)")
_CALL = re.compile(r"^[A-Za-z_][\w.]*\s*\(.*\)\s*;?$")


def _is_license(c: Comment, cfg: FilterConfig) -> bool:
    hits = cfg.license_keywords.intersection(tokenize(c.text))
    return len(hits) >= cfg.license_min_keywords


def _is_code(c: Comment, cfg: FilterConfig) -> bool:
    lines = [ln.strip().lstrip("*").strip() for ln in c.text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        return False
    code = sum(
        1 for ln in lines
        if ln.endswith(_CODE_END) or _ASSIGN.match(ln) or _CALL.match(ln)
    )
    return code / len(lines) >= cfg.code_line_ratio


def _normalise(text: str) -> str:
    return " ".join(text.split()).lower()


def apply_filters(
    comments: list[Comment], config: Optional[FilterConfig] = None
) -> tuple[list[Comment], list[tuple[Comment, str]]]:
    cfg = config or FilterConfig()
    kept: list[Comment] = []
    dropped: list[tuple[Comment, str]] = []
    for c in comments:
        if cfg.license_enabled and _is_license(c, cfg):
            dropped.append((c, "license"))
        elif cfg.code_enabled and _is_code(c, cfg):
            dropped.append((c, "commented-code"))
        elif _normalise(c.text) in cfg.ide_generated_texts:
            dropped.append((c, "ide-generated"))
        elif c.kind is Kind.DOC and not classify_mat(c, cfg.doc_tags).is_satd:
            dropped.append((c, "doc-comment"))
        else:
            kept.append(c)
    return kept, dropped


FILTER_RULES = ("license", "commented-code", "ide-generated", "doc-comment")


def _split_list(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _pairs(value: str) -> tuple[tuple[str, str], ...]:
    pairs = []
    for item in _split_list(value):
        parts = item.split()
        if len(parts) != 2:
            raise ValueError(f"delimiter pair must be 'open close', got {item!r}")
        pairs.append((parts[0], parts[1]))
    return tuple(pairs)


def _bool(value: str) -> bool:
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def load_config(path: str | Path) -> tuple[LanguageProfile, FilterConfig]:
    """Read ``key = value`` lines; lists are comma-separated.

    Keys: line_prefixes, block_delimiters, doc_delimiters (pairs written
    ``open close``), string_quotes, escape, extensions, license_keywords,
    license_min_keywords, license_filter, code_filter, code_line_ratio,
    ide_generated_texts, doc_tags.
    """
    prof: dict = {}
    filt: dict = {}
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            try:
                if key == "line_prefixes":
                    prof[key] = tuple(_split_list(value))
                elif key in ("block_delimiters", "doc_delimiters"):
                    prof[key] = _pairs(value)
                elif key == "string_quotes":
                    prof[key] = tuple(_split_list(value))
                elif key == "escape":
                    prof[key] = value
                elif key == "extensions":
                    prof[key] = tuple(_split_list(value))
                elif key == "license_keywords":
                    filt[key] = frozenset(v.lower() for v in _split_list(value))
                elif key == "license_min_keywords":
                    filt[key] = int(value)
                elif key == "license_filter":
                    filt["license_enabled"] = _bool(value)
                elif key == "code_filter":
                    filt["code_enabled"] = _bool(value)
                elif key == "code_line_ratio":
                    filt[key] = float(value)
                elif key == "ide_generated_texts":
                    filt[key] = frozenset(_normalise(v) for v in _split_list(value))
                elif key == "doc_tags":
                    filt[key] = TagSet.default().extend(_split_list(value))
                else:
                    raise ValueError(f"unknown key {key!r}")
            except ValueError as e:
                raise ValueError(f"{path}:{lineno}: {e}") from None
    return LanguageProfile(**prof), FilterConfig(**filt)


def scan_file(
    path: str | Path,
    profile: LanguageProfile = JAVA,
    display_path: Optional[str] = None,
    project: str = "",
) -> list[Comment]:
    """Extract and group the comments of one file (ids restart at 1)."""
    data = Path(path).read_bytes()
    comments = extract_comments(data, profile, display_path or str(path), project)
    return group_consecutive(comments)
