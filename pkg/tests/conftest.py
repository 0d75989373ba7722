import os
from pathlib import Path

import pytest

from satdmat.corpus import Comment, Corpus, Label

ROOT = Path(__file__).resolve().parent.parent


def make_corpus(project, rows, start=1):
    """rows: (text, is_satd) pairs."""
    return Corpus(project, [
        Comment(project, i, text, gold_label=Label.SATD if satd else Label.NON_SATD)
        for i, (text, satd) in enumerate(rows, start)
    ])


@pytest.fixture
def toy_corpora():
    """Three small labeled projects with tagged and untagged debt."""
    a = make_corpus("A", [
        ("TODO: fix this ugly workaround", True),
        ("hack to make the parser happy", True),
        ("temporary kludge, remove later", True),
        ("returns the number of rows", False),
        ("the parser state", False),
        ("compute the total size", False),
    ])
    b = make_corpus("B", [
        ("FIXME broken when empty", True),
        ("ugly temporary kludge", True),
        ("this is a workaround, remove later", True),
        ("constructor for the widget", False),
        ("gets the name of the widget", False),
        ("returns the size", False),
    ])
    c = make_corpus("C", [
        ("XXX temporary until upstream fixes it", True),
        ("kludge: remove later", True),
        ("todo list model", False),
        ("the number of rows in the table", False),
        ("returns the widget name", False),
        ("ugly workaround for a bug", True),
    ])
    return {"A": a, "B": b, "C": c}


@pytest.fixture(scope="session")
def dataset_dir():
    d = os.environ.get("SATD_DATASET")
    if not d:
        pytest.skip("SATD_DATASET not set; benchmark dataset unavailable")
    return Path(d)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
