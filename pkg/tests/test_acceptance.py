"""Acceptance criteria, one test each; a PASS/FAIL/SKIP line per criterion is printed at the end of the run."""

import json
import math
import os
import time

import numpy as np
import pytest
import scipy.sparse as sp
import yaml

from conftest import ACCEPTANCE_LINES
from hateseq.corpus import binarize, load_dataset, split
from hateseq.ensemble import EnsembleSpec, adaboost_fit
from hateseq.evalreport import ConfusionMatrix, evaluate, metrics
from hateseq.features import Vectorizer, count_matrix, fit_vocabulary
from hateseq.harness.config import load_config
from hateseq.harness.runner import run_experiment, strip_timings
from hateseq.learners import ClassifierSpec, train
from hateseq.pipeline import Sequence, preprocess_text, preset, run_pipeline
from hateseq.textprep import StageId, apply_stage

from test_ensemble import X10, Y10, brute_adaboost
from test_features import THREE, brute_tfidf


def record(number, ok, detail):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    assert ok, detail


def skip(number, detail):
    ACCEPTANCE_LINES.append(f"SKIP criterion {number}: {detail}")
    pytest.skip(detail)


def test_criterion_1_golden_preprocessing(lex):
    t0 = time.perf_counter()
    pairs = [
        ("II", "Sunday is looking pretty good so far 😊", "Sunday is looking pretty good so far happy"),
        ("III", "usedbytrendypeople", "used by trendy people"),
        ("V", "Fuccckkkkkk", "Fuck"),
        ("VII", "don't", "do not"),
        ("IX", "Lol82211", "Lol"),
    ]
    bad = [(s, t, apply_stage(s, t, lex)) for s, t, want in pairs if apply_stage(s, t, lex) != want]
    text = "!!!!!!!she look like a tranny"
    for stage in ("VIII", "X"):
        text = apply_stage(stage, text, lex)
    if text != "she look like a tranny":
        bad.append(("VIII,X", "!!!!!!!she look like a tranny", text))
    elapsed = time.perf_counter() - t0
    record(1, not bad and elapsed < 1.0, f"{len(pairs) + 1} golden pairs, {len(bad)} mismatches, {elapsed:.3f}s")


def test_criterion_2_order_witness(lex):
    t0 = time.perf_counter()
    proposed = preset("PROPOSED")
    order = list(proposed.stages)
    i, j = order.index(StageId.IV), order.index(StageId.IX)
    order[i], order[j] = order[j], order[i]
    slang_first = preprocess_text("2nite #w'll", proposed, lex)
    numerals_first = preprocess_text("2nite #w'll", Sequence("IX-before-IV", tuple(order)), lex)
    elapsed = time.perf_counter() - t0
    ok = slang_first != numerals_first and "tonight" in slang_first.split() and elapsed < 1.0
    record(2, ok, f"IV<IX -> {slang_first!r}, IX<IV -> {numerals_first!r}, {elapsed:.3f}s")


def _boost_check(state, X, y):
    worst = 0.0
    for j, h in enumerate(state.hypotheses):
        if state.errors[j] > 1e-12:
            after = state.phi_history[j + 1]
            worst = max(worst, abs(after[h.predict(X) != y].sum() - 0.5))
    return worst


def test_criterion_3_adaboost_oracle():
    X = sp.csr_matrix(X10[:, None])
    dt1 = ClassifierSpec.of("DT", max_depth=1, min_leaf=1)
    state = adaboost_fit(EnsembleSpec("ADABOOST", dt1, k=8, seed=1), X, Y10).state
    trace = brute_adaboost(X10, Y10, 8)
    diff = 0.0 if len(trace) == len(state.alphas) else math.inf
    for j, (eps, alpha, phi, _) in enumerate(trace[: len(state.alphas)]):
        diff = max(diff, abs(state.errors[j] - eps), abs(state.alphas[j] - alpha),
                   float(np.abs(state.phi_history[j + 1] - phi).max()))
    reweight = _boost_check(state, X, Y10)
    rng = np.random.default_rng(0)
    Xr = sp.csr_matrix(rng.random((80, 5)))
    yr = np.where(Xr.toarray()[:, 0] + 0.3 * rng.standard_normal(80) > 0.5, 1, -1)
    for base in (dt1, ClassifierSpec.of("LR", epochs=5), ClassifierSpec.of("KN", k=3)):
        s = adaboost_fit(EnsembleSpec("ADABOOST", base, k=6, seed=2), Xr, yr).state
        reweight = max(reweight, _boost_check(s, Xr, yr))
    record(3, diff <= 1e-9 and reweight <= 1e-9,
           f"{len(trace)} rounds, max trace diff {diff:.1e}, max |reweighted error - 0.5| {reweight:.1e}")


def test_criterion_4_vectorizer_oracle():
    terms, counts, tfidf = brute_tfidf(THREE)
    vocab = fit_vocabulary(THREE, min_df=1)
    got_counts = count_matrix(THREE, vocab).toarray()
    got_tfidf = Vectorizer("tfidf", min_df=1, max_features=None).fit(THREE).transform(THREE).toarray()
    diff = max(np.abs(got_counts - counts).max(), np.abs(got_tfidf - tfidf).max())
    norms = np.linalg.norm(got_tfidf, axis=1)
    norm_err = float(np.abs(norms[norms > 0] - 1.0).max())
    ok = list(vocab.terms) == terms and diff <= 1e-9 and norm_err <= 1e-9
    record(4, ok, f"max diff {diff:.1e}, max |norm - 1| {norm_err:.1e}")


def test_criterion_5_f1_consistency():
    m = metrics(ConfusionMatrix(tp=2352, tn=500, fp=98, fn=48))  # P = 0.96, R = 0.98 exactly
    shown = math.floor(m.f1 * 1e4) / 1e4
    ok = abs(m.precision - 0.96) < 1e-12 and abs(m.recall - 0.98) < 1e-12 and shown == 0.9698
    record(5, ok, f"F1 = {m.f1:.6f}, shown to 4 digits as {shown:.4f} (published 0.9698)")


@pytest.fixture(scope="module")
def fixture_grid(tmp_path_factory):
    out = tmp_path_factory.mktemp("grid")
    config = {
        "version": 1, "seed": 42, "datasets": [{"path": "fixture", "format": "generic_csv"}],
        "sequences": ["T2", "PROPOSED"], "vectorizer": "tfidf", "models": ["LR", "SVM", "DT", "RF", "KN"],
        "ensembles": [{"kind": "STACKING", "bases": ["LR", "SVM", "RF"], "meta": "LR", "folds": 5},
                      {"kind": "BAGGING", "base": "DT", "k": 15}],
        "ensemble_sequences": ["PROPOSED"], "workers": 4, "output": str(out),
    }
    path = out / "grid.yaml"
    path.write_text(yaml.safe_dump(config), encoding="utf-8")
    t0 = time.perf_counter()
    outcome = run_experiment(load_config(path))
    acc = {r.cell_id: r.metrics.accuracy for r in outcome.results if r.status == "ok"}
    return acc, time.perf_counter() - t0


def test_criterion_6_ensembles_vs_bases(fixture_grid):
    acc, elapsed = fixture_grid
    best = max(acc[f"PROPOSED|tfidf|{m}"] for m in ("LR", "SVM", "DT", "RF", "KN"))
    stack = acc["PROPOSED|tfidf|STACKING(LR+SVM+RF)"]
    dt, bag = acc["PROPOSED|tfidf|DT"], acc["PROPOSED|tfidf|BAGGING(DT)"]
    ok = stack >= best - 0.02 and bag >= dt - 0.01 and elapsed < 300
    record(6, ok, f"stacking {stack:.4f} vs best base {best:.4f}; bagging(15 DT) {bag:.4f} vs DT {dt:.4f}; "
                  f"grid {elapsed:.0f}s")


def test_criterion_7_proposed_vs_identity(fixture_grid):
    acc, _ = fixture_grid
    models = ("LR", "SVM", "DT", "RF", "KN")
    wins = [m for m in models if acc[f"PROPOSED|tfidf|{m}"] >= acc[f"T2|tfidf|{m}"]]
    detail = ", ".join(f"{m} {acc[f'PROPOSED|tfidf|{m}']:.4f}/{acc[f'T2|tfidf|{m}']:.4f}" for m in models)
    record(7, len(wins) >= 3, f"PROPOSED >= T2 for {len(wins)}/5 models ({detail})")


def test_criterion_8_real_data(lex):
    path = os.environ.get("HATESEQ_DT_CSV")
    if not path or not os.path.exists(path):
        skip(8, "set HATESEQ_DT_CSV to the public DT dataset CSV to run")
    corpus = binarize(load_dataset(path, "dt_csv"))
    parts = split(corpus, seed=42)
    seq = preset("PROPOSED")
    train_c, test_c = (run_pipeline(seq, p, lex, workers=4) for p in (parts.train, parts.test))
    vec = Vectorizer("tfidf").fit(train_c)
    model = train(ClassifierSpec("LR", seed=42), vec.transform(train_c), train_c.signs)
    accuracy = evaluate(model.predict(vec.transform(test_c)), test_c.signs).accuracy
    baseline = 20620 / 24783
    record(8, accuracy >= baseline + 0.03, f"accuracy {accuracy:.4f} vs baseline {baseline:.4f} + 0.03")


def test_criterion_9_determinism(tmp_path):
    config = {
        "version": 1, "seed": 5, "datasets": [{"path": "fixture", "format": "generic_csv"}],
        "sequences": ["PROPOSED", "T8"], "models": ["LR", "RF"],
        "ensembles": [{"kind": "VOTE_SOFT", "bases": ["LR", "DT", "KN"], "weights": "validation"},
                      {"kind": "BAGGING", "base": "DT", "k": 5}, {"kind": "ADABOOST", "k": 10}],
        "ensemble_sequences": ["PROPOSED"], "workers": 3,
    }
    texts = []
    for run in ("a", "b"):
        path = tmp_path / f"{run}.yaml"
        path.write_text(yaml.safe_dump({**config, "output": str(tmp_path / run)}), encoding="utf-8")
        run_experiment(load_config(path))
        report = strip_timings(json.loads((tmp_path / run / "results.json").read_text(encoding="utf-8")))
        texts.append(json.dumps(report, sort_keys=True, indent=2))
    record(9, texts[0] == texts[1], f"two runs, {len(texts[0])} bytes each after removing timings, identical")
