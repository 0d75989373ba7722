import json
import subprocess
import sys

import pytest

from satdmat.cli import main, read_predictions
from satdmat.corpus import read_corpus, write_corpus

from conftest import make_corpus
from test_extractor import TAG_EXAMPLES


@pytest.fixture
def corpora_dir(tmp_path, toy_corpora):
    d = tmp_path / "corpora"
    d.mkdir()
    for name, c in toy_corpora.items():
        write_corpus(c, d / f"{name}.jsonl")
    return d


def _java_tree(tmp_path, lines):
    src = tmp_path / "src"
    src.mkdir()
    body = "\n\n".join(f"  {l}\n  void m{i}() {{}}" for i, l in enumerate(lines))
    (src / "T.java").write_text(f"class T {{\n{body}\n}}\n")
    return src


def test_scan_one_todo(tmp_path, capsys):
    src = _java_tree(tmp_path, ["// TODO fix this"])
    out = tmp_path / "c.jsonl"
    assert main(["scan", str(src), "--out", str(out)]) == 0
    err = capsys.readouterr().err
    assert "dropped:license" in err and "kept" in err
    c = read_corpus(out)
    assert len(c) == 1 and c.comments[0].origin.file == "T.java"


def test_scan_empty_dir(tmp_path, capsys):
    (tmp_path / "empty").mkdir()
    out = tmp_path / "c.jsonl"
    assert main(["scan", str(tmp_path / "empty"), "--out", str(out)]) == 0
    assert "WARNING" in capsys.readouterr().err
    assert len(read_corpus(out)) == 0


def test_scan_missing_path(tmp_path, capsys):
    assert main(["scan", str(tmp_path / "nope")]) == 1
    assert "no such file" in capsys.readouterr().err


def test_scan_and_classify_tag_examples(tmp_path, capsys):
    src = _java_tree(tmp_path, TAG_EXAMPLES)
    out = tmp_path / "c.jsonl"
    assert main(["scan", str(src), "--out", str(out), "--parallelism", "2"]) == 0
    assert len(read_corpus(out)) == 8
    capsys.readouterr()
    preds = tmp_path / "p.jsonl"
    assert main(["classify", str(out), "--out", str(preds)]) == 0
    text = capsys.readouterr().out
    assert "8 of 8 comments classified SATD" in text
    assert "T.java:2: SATD [todo] TODO: Fully implement this!" in text
    assert all(p.is_satd for p in read_predictions(preds))


def test_strict_vs_fuzzy(tmp_path, capsys):
    c = tmp_path / "c.jsonl"
    write_corpus(make_corpus("P", [("pleasefixme now", True)]), c)
    main(["classify", str(c), "--strategy", "strict"])
    assert "0 of 1" in capsys.readouterr().out
    main(["classify", str(c), "--classifier", "mat-fuzzy"])
    assert "1 of 1" in capsys.readouterr().out


def test_classify_formats(corpora_dir, capsys):
    main(["classify", str(corpora_dir / "A.jsonl"), "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert doc[0] == {"project": "A", "id": 1, "label": "SATD", "evidence": ["todo", "todo"]}
    main(["classify", str(corpora_dir / "A.jsonl"), "--format", "csv"])
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "project,id,label,rule,token" and lines[1] == "A,1,SATD,todo,todo"


def test_pattern_needs_file(corpora_dir, capsys, tmp_path):
    assert main(["classify", str(corpora_dir), "--classifier", "pattern"]) == 1
    assert "--patterns" in capsys.readouterr().err
    pats = tmp_path / "p.txt"
    pats.write_text("ugly\nremove later\n")
    assert main(["classify", str(corpora_dir), "--classifier", "pattern", "--patterns", str(pats)]) == 0


def test_tm_train_save_load(corpora_dir, tmp_path, capsys):
    model = tmp_path / "m.json"
    args = ["classify", str(corpora_dir / "C.jsonl"), "--classifier", "tm", "--format", "json"]
    assert main(args + ["--train", str(corpora_dir / "A.jsonl"), str(corpora_dir / "B.jsonl"),
                        "--save-model", str(model)]) == 0
    first = capsys.readouterr().out
    assert main(args + ["--model", str(model)]) == 0
    assert capsys.readouterr().out == first
    assert main(args) == 1
    assert "--model" in capsys.readouterr().err


def test_evaluate_formats_and_determinism(corpora_dir, tmp_path, capsys):
    out1, out2 = tmp_path / "1.json", tmp_path / "2.json"
    base = ["evaluate", str(corpora_dir), "--classifier", "mat", "--classifier", "tm", "--ratio", "1.0",
            "--format", "json"]
    assert main(base + ["--out", str(out1)]) == 0
    assert main(base + ["--out", str(out2), "--parallelism", "3"]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert set(doc) == {"mat-fuzzy", "tm"}
    assert set(doc["tm"]["projects"]) == {"A", "B", "C"}
    main(["evaluate", str(corpora_dir), "--classifier", "mat-strict", "--classifier", "mat-fuzzy"])
    text = capsys.readouterr().out
    assert "mat-strict:precision" in text and "Average" in text


def test_evaluate_single_fixture_and_unlabeled(tmp_path, capsys):
    c = tmp_path / "one.jsonl"
    write_corpus(make_corpus("Solo", [("TODO x", True), ("y", False)]), c)
    assert main(["evaluate", str(c)]) == 0
    rows = [l.split() for l in capsys.readouterr().out.splitlines() if l.startswith("Solo")]
    assert rows == [["Solo", "1.000", "1.000", "1.000"]]
    u = tmp_path / "u.jsonl"
    u.write_text('{"project": "U", "id": 1, "text": "x"}\n')
    assert main(["evaluate", str(u)]) == 1
    assert "not labeled" in capsys.readouterr().err


def test_compare_published_columns(capsys):
    assert main(["compare", "--ours-published", "MAT", "--against", "Pattern", "--indicator", "precision",
                 "--format", "json"]) == 0
    (cell,) = json.loads(capsys.readouterr().out)
    assert round(cell["p_value"], 3) == 0.037 and round(cell["cliffs_delta"], 3) == 0.680
    assert cell["magnitude"] == "large" and cell["significant"]
    assert main(["compare", "--ours-published", "MAT", "--scenario", "oto", "--against", "TM",
                 "--indicator", "f1", "--format", "json"]) == 0
    (cell,) = json.loads(capsys.readouterr().out)
    assert round(cell["p_value"], 3) == 0.004 and round(cell["cliffs_delta"], 3) == 0.680


def test_compare_self_and_missing_cell(capsys):
    assert main(["compare", "--ours-published", "TM", "--against", "TM", "--format", "json"]) == 0
    for cell in json.loads(capsys.readouterr().out):
        assert cell["cliffs_delta"] == 0 and cell["average_improvement"] == 0
    assert main(["compare", "--ours-published", "MAT-ext", "--against", "TM"]) == 0
    capsys.readouterr()
    assert main(["compare", "--ours-published", "MAT", "--against", "Nobody"]) == 1
    assert "no published value" in capsys.readouterr().err


def test_compare_with_scores_and_overlap(corpora_dir, tmp_path, capsys):
    pub = tmp_path / "pub.csv"
    rows = ["approach,project,indicator,value"]
    for p in "ABC":
        for ind in ("precision", "recall", "f1"):
            rows.append(f"Other,{p},{ind},0.5")
    pub.write_text("\n".join(rows) + "\n")
    scores = tmp_path / "s.json"
    preds = tmp_path / "preds"
    assert main(["evaluate", str(corpora_dir), "--format", "json", "--out", str(scores),
                 "--save-predictions", str(preds), "--classifier", "mat", "--classifier", "mat-strict"]) == 0
    assert main(["compare", str(corpora_dir), "--published", str(pub), "--against", "Other",
                 "--predictions", f"fuzzy={preds / 'mat-fuzzy.jsonl'}",
                 "--predictions", f"strict={preds / 'mat-strict.jsonl'}"]) == 0
    out = capsys.readouterr().out
    assert "Other:f1" in out and "#TPs" in out and "Total" in out
    assert main(["compare", "--scores", str(scores), "--published", str(pub), "--against", "Other"]) == 1
    assert "exactly one classifier" in capsys.readouterr().err


def test_import_pair_and_dir(tmp_path, capsys):
    d = tmp_path / "data" / "apache-ant-1.7.0"
    d.mkdir(parents=True)
    (d / "comments").write_text("// TODO x\nplain\n")
    (d / "labels").write_text("DESIGN\nWITHOUT_CLASSIFICATION\n")
    m = tmp_path / "map.txt"
    m.write_text("SATD = DESIGN\nNonSATD = WITHOUT_CLASSIFICATION\n")
    out = tmp_path / "out"
    assert main(["import", str(tmp_path / "data"), "--label-map", str(m), "--out", str(out)]) == 0
    assert "Ant" in capsys.readouterr().err
    c = read_corpus(out / "Ant.jsonl")
    assert c.labeled and c.n_satd() == 1
    assert main(["import", str(tmp_path / "data")]) == 1  # default map rejects DESIGN
    assert "unknown label" in capsys.readouterr().err
    single = tmp_path / "ant.jsonl"
    assert main(["import", "--comments", str(d / "comments"), "--labels", str(d / "labels"),
                 "--label-map", str(m), "--project", "Ant", "--out", str(single)]) == 0
    assert read_corpus(single).comments == c.comments


def test_bad_parallelism_and_usage(capsys, corpora_dir):
    assert main(["evaluate", str(corpora_dir), "--parallelism", "0"]) == 2
    with pytest.raises(SystemExit) as e:
        main(["evaluate", str(corpora_dir), "--classifier", "nlp"])
    assert e.value.code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "satdmat", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "satdmat" in r.stdout
