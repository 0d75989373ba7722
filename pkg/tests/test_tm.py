import math
from dataclasses import dataclass

import pytest
from hypothesis import given, settings, strategies as st

from satdmat.corpus import Comment, Corpus, Label
from satdmat.matchers import Prediction, classify_mat
from satdmat.tm import (
    TmConfig, VotingEnsemble, build_vocabulary, combine_with_mat, features_of, information_gain,
    load_ensemble, majority, predict_nbm, predict_vote, save_ensemble, smoothed_idf, train_nbm,
    train_project_model, train_tm, vectorize,
)

from conftest import make_corpus

S, N = Label.SATD, Label.NON_SATD
DOCS = [["todo", "fix"], ["todo", "bug"], ["size", "fix"], ["size"]]
LABELS = [S, S, N, N]


def test_information_gain_hand_values():
    # todo / size split the labels perfectly, fix is independent of them
    assert information_gain(2, 2, 2, 4) == pytest.approx(1.0, abs=1e-12)
    assert information_gain(0, 2, 2, 4) == pytest.approx(1.0, abs=1e-12)
    assert information_gain(1, 2, 2, 4) == pytest.approx(0.0, abs=1e-12)
    # bug: present in 1 SATD doc; absent side has 3 docs, 1 SATD
    assert information_gain(1, 1, 2, 4) == pytest.approx(0.3112781244591328, abs=1e-12)


def test_information_gain_matches_mutual_information():
    metrics = pytest.importorskip("sklearn.metrics")
    labels = [1, 1, 1, 0, 0, 0, 0, 1, 0, 0]
    present = [1, 0, 1, 0, 1, 0, 0, 1, 0, 1]
    mi_bits = metrics.mutual_info_score(labels, present) / math.log(2)
    df = sum(present)
    df_pos = sum(p and l for p, l in zip(present, labels))
    assert information_gain(df_pos, df, sum(labels), len(labels)) == pytest.approx(mi_bits, abs=1e-12)


@given(st.integers(1, 50), st.integers(0, 50), st.integers(0, 50))
def test_ig_bounds(n, a, b):
    n_pos = min(a, n)
    df = min(b, n)
    for df_pos in range(max(0, df - (n - n_pos)), min(df, n_pos) + 1):
        ig = information_gain(df_pos, df, n_pos, n)
        p = n_pos / n
        h = 0.0 if p in (0, 1) else -(p * math.log2(p) + (1 - p) * math.log2(1 - p))
        assert -1e-12 <= ig <= h + 1e-12


def test_vocabulary_selection():
    v = build_vocabulary(DOCS, LABELS, 0.5)
    assert v.features == ("size", "todo")  # IG tie broken lexicographically
    assert v.n_candidates == 4 and v.n_docs == 4
    full = build_vocabulary(DOCS, LABELS, 1.0)
    assert full.features == ("size", "todo", "bug", "fix")
    assert list(full.ig_scores) == sorted(full.ig_scores, reverse=True)
    assert math.ceil(0.1 * 3660) == 366


def test_perfect_predictor_has_max_ig():
    docs = [["todo", "a"], ["todo", "b"], ["a"], ["b"]]
    v = build_vocabulary(docs, LABELS, 1.0)
    assert v.features[0] == "todo" and v.ig_scores[0] == pytest.approx(1.0)


def test_single_class_rejected():
    with pytest.raises(ValueError, match="single class"):
        build_vocabulary([["a"], ["b"]], [S, S])
    with pytest.raises(ValueError):
        build_vocabulary(DOCS, LABELS, 0)


def test_idf_and_vectorize():
    v = build_vocabulary(DOCS, LABELS, 1.0)
    assert smoothed_idf(2, 4) == pytest.approx(math.log(5 / 3) + 1)
    assert v.idf[v.index["bug"]] == pytest.approx(math.log(5 / 2) + 1)
    assert vectorize(["zzz", "qq"], v) == {}
    one = vectorize(["todo"], v)["todo"]
    assert vectorize(["todo", "todo", "zzz"], v)["todo"] == pytest.approx(2 * one)
    assert vectorize(["todo", "todo"], v, "counts") == {"todo": 2.0}
    # hand-computed weights for document ["todo", "fix", "fix"]
    w = vectorize(["todo", "fix", "fix"], v)
    assert w == pytest.approx({"todo": 1.5108256237659907, "fix": 2 * 1.5108256237659907})


def test_nbm_hand_posterior():
    v = build_vocabulary(DOCS, LABELS, 1.0)
    m = train_nbm(DOCS, LABELS, v, alpha=1.0)
    i3, i52 = math.log(5 / 3) + 1, math.log(5 / 2) + 1
    # SATD mass: todo 2*i3, fix i3, bug i52; NonSATD mass: size 2*i3, fix i3
    den_s = 3 * i3 + i52 + 4
    den_n = 3 * i3 + 4
    held_out = ["todo", "size", "fix"]
    exp_s = math.log(0.5) + i3 * (math.log((2 * i3 + 1) / den_s) + math.log(1 / den_s) + math.log((i3 + 1) / den_s))
    exp_n = math.log(0.5) + i3 * (math.log(1 / den_n) + math.log((2 * i3 + 1) / den_n) + math.log((i3 + 1) / den_n))
    post = m.log_posteriors(held_out)
    assert post[S] == pytest.approx(exp_s, abs=1e-12)
    assert post[N] == pytest.approx(exp_n, abs=1e-12)
    assert sum(m.priors.values()) == pytest.approx(1.0)
    assert m.predict_tokens(["todo"]) is S
    assert m.predict_tokens(["size"]) is N


def test_nbm_matches_sklearn():
    nb = pytest.importorskip("sklearn.naive_bayes")
    np = pytest.importorskip("numpy")
    docs = [["todo", "fix", "fix"], ["hack", "ugli"], ["todo", "later"], ["size", "row"],
            ["row", "count", "fix"], ["name", "size"], ["later", "size"]]
    labels = [S, S, S, N, N, N, N]
    v = build_vocabulary(docs, labels, 1.0)
    X = np.array([[vectorize(d, v).get(f, 0.0) for f in v.features] for d in docs])
    y = [int(l is S) for l in labels]
    ref = nb.MultinomialNB(alpha=1.0).fit(X, y)
    m = train_nbm(docs, labels, v, 1.0)
    for d in docs + [["todo", "size"], ["unseen"]]:
        x = np.array([[vectorize(d, v).get(f, 0.0) for f in v.features]])
        jll = ref.predict_joint_log_proba(x)[0]
        post = m.log_posteriors(d)
        assert post[N] == pytest.approx(jll[0], abs=1e-9)
        assert post[S] == pytest.approx(jll[1], abs=1e-9)


def test_alpha_smooths_toward_uniform():
    v = build_vocabulary(DOCS, LABELS, 1.0)
    spread = []
    for a in (1.0, 2.0, 100.0):
        probs = [math.exp(x) for x in train_nbm(DOCS, LABELS, v, a).log_cond[S]]
        spread.append(max(probs) - min(probs))
    assert spread[0] > spread[1] > spread[2]


def test_empty_comment_gets_prior_class():
    docs = [["todo"], ["a"], ["b"], ["c"]]
    v = build_vocabulary(docs, [S, N, N, N], 1.0)
    assert train_nbm(docs, [S, N, N, N], v).predict_tokens([]) is N
    # equal priors and no evidence: tie goes to NonSATD
    assert train_nbm(DOCS, LABELS, build_vocabulary(DOCS, LABELS, 1.0)).predict_tokens([]) is N


@dataclass(frozen=True)
class _Fixed:
    label: Label
    stopwords: frozenset = frozenset()

    def predict_tokens(self, tokens):
        return self.label


def _ens(n_satd, n, threshold=None):
    models = tuple([_Fixed(S)] * n_satd + [_Fixed(N)] * (n - n_satd))
    return VotingEnsemble(models, threshold or majority(n))


def test_vote_threshold():
    c = Comment("P", 1, "anything")
    assert predict_vote(_ens(5, 9), c).label is S
    assert predict_vote(_ens(4, 9), c).label is N
    assert predict_vote(_ens(1, 1), c).label is S
    assert predict_vote(_ens(0, 1), c).label is N
    assert predict_vote(_ens(1, 2), c).label is N  # even split goes to NonSATD
    assert predict_vote(_ens(2, 9, threshold=2), c).label is S
    assert majority(9) == 5 and majority(2) == 2
    with pytest.raises(ValueError):
        VotingEnsemble((_Fixed(S),), 2)
    with pytest.raises(ValueError):
        VotingEnsemble((), 1)


def test_identical_submodels_equal_single(toy_corpora):
    m = train_project_model(toy_corpora["A"])
    ens = VotingEnsemble((m, m, m), 2)
    for c in toy_corpora["B"]:
        assert predict_vote(ens, c).label is predict_nbm(m, c).label


def test_features_drop_stopwords_before_stemming():
    stops = frozenset({"the", "this"})
    assert features_of("TODO: fix the parsers in this file", stops) == ["todo", "fix", "parser", "in", "file"]


def test_train_tm_and_persistence(toy_corpora, tmp_path):
    cfg = TmConfig(ratio=0.5)
    ens = train_tm([toy_corpora["A"], toy_corpora["B"]], cfg)
    assert ens.threshold == 2 and ens.sources == ("A", "B")
    p = tmp_path / "model.json"
    save_ensemble(ens, p)
    back = load_ensemble(p)
    assert back == ens
    for c in toy_corpora["C"]:
        assert back.predict(c) == ens.predict(c)
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": "other"}')
    with pytest.raises(ValueError):
        load_ensemble(bad)


def test_training_requires_labels():
    with pytest.raises(ValueError, match="not labeled"):
        train_project_model(Corpus("P", [Comment("P", 1, "x")]))
    with pytest.raises(ValueError, match="P: training data has a single class"):
        train_project_model(make_corpus("P", [("a", True), ("b", True)]))


def test_config_validation():
    for kw in ({"ratio": 0}, {"ratio": 1.5}, {"alpha": 0}, {"weighting": "bm25"}):
        with pytest.raises(ValueError):
            TmConfig(**kw)


def test_counts_mode(toy_corpora):
    m = train_project_model(toy_corpora["A"], TmConfig(ratio=1.0, weighting="counts"))
    assert m.weighting == "counts"
    assert predict_nbm(m, Comment("X", 1, "hack workaround")).label is S


def test_combine_with_mat():
    corpus = [Comment("P", 1, "// TODO fix"), Comment("P", 2, "ugly kludge"), Comment("P", 3, "getter")]
    never = lambda c: Prediction(c.project, c.id, N)
    kludge = lambda c: Prediction(c.project, c.id, S if "kludge" in c.text else N)
    assert [p.label for p in combine_with_mat(corpus, never)] == [S, N, N]
    out = combine_with_mat(corpus, kludge)
    assert [p.label for p in out] == [S, S, N]
    assert out[0].evidence == ("todo", "todo") and out[1].evidence is None


_texts = st.lists(st.sampled_from(
    ["todo", "fixme", "hack", "ugly", "kludge", "the", "size", "row", "name", "temporary", "xxx", "widget"]
), min_size=1, max_size=6).map(" ".join)


@settings(max_examples=100, deadline=None)
@given(st.lists(_texts, min_size=1, max_size=15), st.lists(st.booleans(), min_size=15, max_size=15))
def test_combined_superset_of_mat(texts, flips):
    corpus = [Comment("P", i, t) for i, t in enumerate(texts, 1)]
    sup = lambda c: Prediction(c.project, c.id, S if flips[c.id - 1] else N)
    combined = combine_with_mat(corpus, sup)
    for c, p in zip(corpus, combined):
        if classify_mat(c).is_satd:
            assert p.is_satd
        else:
            assert p == sup(c)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(_texts, st.booleans()), min_size=4, max_size=20))
def test_training_is_deterministic(rows):
    rows = rows + [("todo hack", True), ("the size", False)]
    a = make_corpus("P", rows)
    m1, m2 = train_project_model(a), train_project_model(a)
    assert m1 == m2
