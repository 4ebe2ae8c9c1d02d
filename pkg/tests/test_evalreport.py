import csv
import io
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hateseq.evalreport import (CellResult, ConfusionMatrix, ReportError, atomic_write, confusion, evaluate, f1_score,
                                metrics, per_class, render_csv, render_markdown, render_report, results_from_json,
                                results_to_json)


def test_confusion_examples():
    assert confusion([1, 1, -1, -1], [1, -1, -1, 1]) == ConfusionMatrix(tp=1, tn=1, fp=1, fn=1)
    assert confusion([1], [-1]) == ConfusionMatrix(tp=0, tn=0, fp=1, fn=0)
    cm = confusion([1, -1, 1], [1, -1, 1])
    assert cm.fp == cm.fn == 0
    with pytest.raises(ValueError):
        confusion([1, 1], [1])


def test_metric_examples():
    m = metrics(ConfusionMatrix(tp=50, tn=40, fp=5, fn=5))
    assert m.accuracy == pytest.approx(0.90)
    assert round(m.precision, 4) == round(m.recall, 4) == round(m.f1, 4) == 0.9091
    perfect = evaluate([1, -1], [1, -1])
    assert (perfect.accuracy, perfect.precision, perfect.recall, perfect.f1) == (1.0, 1.0, 1.0, 1.0)


def test_f1_matches_published_row():
    # tp / (tp + fp) = 0.96 and tp / (tp + fn) = 0.98 exactly
    m = metrics(ConfusionMatrix(tp=2352, tn=500, fp=98, fn=48))
    assert (m.precision, m.recall) == (pytest.approx(0.96), pytest.approx(0.98))
    assert m.f1 == pytest.approx(0.969897, abs=1e-6)
    # the published 0.9698 is this value cut to four digits (rounding gives 0.9699)
    assert math.floor(m.f1 * 1e4) / 1e4 == 0.9698
    assert f1_score(0.96, 0.98) == pytest.approx(m.f1, abs=1e-12)


def test_zero_denominators_are_flagged():
    m = evaluate([-1, -1], [-1, -1])
    assert (m.precision, m.recall, m.f1) == (0.0, 0.0, 0.0)
    assert set(m.undefined) == {"precision", "recall", "f1"}
    with pytest.raises(ValueError):
        metrics(ConfusionMatrix(0, 0, 0, 0))


def brute_metrics(preds, truths):
    tp = tn = fp = fn = 0
    for p, t in zip(preds, truths):
        if p == 1 and t == 1:
            tp += 1
        elif p == -1 and t == -1:
            tn += 1
        elif p == 1:
            fp += 1
        else:
            fn += 1
    prec = tp / (tp + fp) if tp + fp else 0.0
    rec = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    return (tp + tn) / len(preds), prec, rec, f1


pairs = st.lists(st.tuples(st.sampled_from([-1, 1]), st.sampled_from([-1, 1])), min_size=1, max_size=60)


@given(pairs)
@settings(max_examples=200)
def test_metrics_match_brute_force(data):
    preds, truths = zip(*data)
    m = evaluate(preds, truths)
    for got, want in zip((m.accuracy, m.precision, m.recall, m.f1), brute_metrics(preds, truths)):
        assert abs(got - want) <= 1e-12
    assert m.counts.total == len(preds)
    if m.precision > 0 and m.recall > 0:
        assert min(m.precision, m.recall) - 1e-12 <= m.f1 <= max(m.precision, m.recall) + 1e-12


def test_per_class_supports():
    pc = per_class(ConfusionMatrix(tp=3, tn=5, fp=1, fn=2))
    assert pc["inappropriate"]["support"] == 5 and pc["normal"]["support"] == 6
    assert pc["normal"]["precision"] == pytest.approx(5 / 7)


def cell(model, seq, acc_pair=(8, 2), vec="tfidf", status="ok"):
    tp, fn = acc_pair
    m = metrics(ConfusionMatrix(tp=tp, tn=tp, fp=fn, fn=fn))
    return CellResult(f"{seq}|{vec}|{model}", seq, vec, model, 7, "abc123", status=status,
                      metrics=m if status == "ok" else None, per_class=per_class(m.counts),
                      timings={"train_s": 0.5}, extra={"ensemble": model.startswith("VOTE")},
                      error=None if status == "ok" else "boom")


def test_csv_shapes():
    one = list(csv.reader(io.StringIO(render_csv([cell("LR", "T8")]))))
    assert one == [["model", "T8"], ["LR", "0.8000"]]
    grid = [cell(m, f"T{i}") for m in ("SVM", "KN", "LR", "DT", "RF") for i in range(1, 9)]
    rows = list(csv.reader(io.StringIO(render_csv(grid))))
    assert len(rows) == 6 and all(len(r) == 9 for r in rows)
    assert rows[0][1:] == [f"T{i}" for i in range(1, 9)]


def test_json_round_trip():
    results = [cell("LR", "T8"), cell("VOTE_SOFT(LR+SVM+RF)", "PROPOSED"), cell("DT", "T2", status="failed")]
    text = results_to_json(results, {"seed": 1})
    back, meta = results_from_json(text)
    assert back == results and meta == {"seed": 1}
    assert json.loads(text)["schema"] == 1
    with pytest.raises(ValueError):
        results_from_json(json.dumps({"schema": 2, "cells": []}))


def test_rendering_is_pure():
    results = [cell(m, s) for m in ("LR", "DT") for s in ("T2", "PROPOSED")] + [cell("VOTE_HARD", "PROPOSED")]
    assert render_csv(results) == render_csv(list(results))
    md = render_markdown(results)
    assert md == render_markdown(list(results))
    assert "PROPOSED" in md and "VOTE_HARD" in md


def test_render_report_writes_three_files(tmp_path):
    paths = render_report([cell("LR", "T8")], tmp_path / "out", {"k": "v"})
    assert sorted(paths) == ["csv", "json", "markdown"]
    assert all(p.exists() for p in paths.values())
    assert not [p for p in (tmp_path / "out").iterdir() if p.name.endswith(".tmp")]
    with pytest.raises(ValueError):
        render_report([], tmp_path / "empty")


def test_write_failure_names_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    target = blocker / "results.json"
    with pytest.raises(ReportError, match=str(target)):
        atomic_write(target, "{}")


def test_atomic_write_replaces(tmp_path):
    path = tmp_path / "r.json"
    atomic_write(path, "old")
    atomic_write(path, "new")
    assert path.read_text() == "new"
    assert [p.name for p in tmp_path.iterdir()] == ["r.json"]
