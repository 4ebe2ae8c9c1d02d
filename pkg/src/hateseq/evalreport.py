"""Confusion-matrix metrics and the JSON / CSV / markdown result reports.

Metrics are for the positive (inappropriate) class. A ratio with a zero
denominator is reported as 0 and named in ``MetricsReport.undefined``.
"""

import csv
import io
import json
import os
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .learners import as_signs

SCHEMA_VERSION = 1


class ReportError(OSError):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self):
        return self.tp + self.tn + self.fp + self.fn

    def flipped(self):
        """The same tallies seen from the normal class."""
        return ConfusionMatrix(tp=self.tn, tn=self.tp, fp=self.fn, fn=self.fp)


def confusion(predictions, truths):
    p = as_signs(predictions)
    t = as_signs(truths)
    if len(p) != len(t):
        raise ValueError(f"{len(p)} predictions but {len(t)} truths")
    if len(p) == 0:
        raise ValueError("nothing to evaluate")
    return ConfusionMatrix(
        tp=int(np.sum((p == 1) & (t == 1))),
        tn=int(np.sum((p == -1) & (t == -1))),
        fp=int(np.sum((p == 1) & (t == -1))),
        fn=int(np.sum((p == -1) & (t == 1))),
    )


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    counts: ConfusionMatrix
    undefined: tuple = ()

    def as_dict(self):
        return {"accuracy": self.accuracy, "precision": self.precision, "recall": self.recall,
                "f1": self.f1, "counts": asdict(self.counts), "undefined": list(self.undefined)}

    @classmethod
    def from_dict(cls, d):
        return cls(d["accuracy"], d["precision"], d["recall"], d["f1"],
                   ConfusionMatrix(**d["counts"]), tuple(d.get("undefined", ())))


def _ratio(num, den, name, undefined):
    if den == 0:
        undefined.append(name)
        return 0.0
    return num / den


def f1_score(precision, recall):
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def metrics(cm):
    if cm.total <= 0:
        raise ValueError("confusion matrix is empty")
    undefined = []
    precision = _ratio(cm.tp, cm.tp + cm.fp, "precision", undefined)
    recall = _ratio(cm.tp, cm.tp + cm.fn, "recall", undefined)
    if precision + recall == 0:
        undefined.append("f1")
    return MetricsReport(
        accuracy=(cm.tp + cm.tn) / cm.total,
        precision=precision,
        recall=recall,
        f1=f1_score(precision, recall),
        counts=cm,
        undefined=tuple(undefined),
    )


def evaluate(predictions, truths):
    return metrics(confusion(predictions, truths))


def per_class(cm):
    """Precision / recall / F1 for both classes."""
    out = {}
    for name, m in (("inappropriate", cm), ("normal", cm.flipped())):
        r = metrics(m)
        out[name] = {"precision": r.precision, "recall": r.recall, "f1": r.f1,
                     "support": m.tp + m.fn}
    return out


# --------------------------------------------------------------------------
# grid results and rendering

@dataclass
class CellResult:
    """One grid cell: a (sequence, vectorizer, model) combination."""

    cell_id: str
    sequence: str
    vectorizer: str
    model: str
    seed: int
    config_digest: str
    status: str = "ok"
    metrics: MetricsReport = None
    validation: MetricsReport = None
    per_class: dict = None
    timings: dict = field(default_factory=dict)
    error: str = None
    extra: dict = field(default_factory=dict)

    def as_dict(self):
        d = {
            "cell_id": self.cell_id, "sequence": self.sequence, "vectorizer": self.vectorizer,
            "model": self.model, "seed": self.seed, "config_digest": self.config_digest,
            "status": self.status,
            "metrics": self.metrics.as_dict() if self.metrics else None,
            "validation": self.validation.as_dict() if self.validation else None,
            "per_class": self.per_class, "timings": dict(self.timings), "error": self.error,
            "extra": dict(self.extra),
        }
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            cell_id=d["cell_id"], sequence=d["sequence"], vectorizer=d["vectorizer"], model=d["model"],
            seed=d["seed"], config_digest=d["config_digest"], status=d["status"],
            metrics=MetricsReport.from_dict(d["metrics"]) if d.get("metrics") else None,
            validation=MetricsReport.from_dict(d["validation"]) if d.get("validation") else None,
            per_class=d.get("per_class"), timings=dict(d.get("timings") or {}), error=d.get("error"),
            extra=dict(d.get("extra") or {}),
        )


def _ordered(values):
    seen = []
    for v in values:
        if v not in seen:
            seen.append(v)
    return seen


def results_to_json(results, meta=None):
    doc = {"schema": SCHEMA_VERSION, "meta": dict(meta or {}), "cells": [r.as_dict() for r in results]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def results_from_json(text):
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema {doc.get('schema')!r}")
    return [CellResult.from_dict(c) for c in doc["cells"]], doc.get("meta", {})


def _row_label(r):
    return r.model if r.vectorizer is None else f"{r.model} [{r.vectorizer}]"


def accuracy_matrix(results):
    """``(row labels, column aliases, values)``; missing or failed cells are None."""
    ok = [r for r in results if r.status == "ok" and r.metrics is not None]
    vectorizers = {r.vectorizer for r in ok}
    label = (lambda r: r.model) if len(vectorizers) <= 1 else _row_label
    rows = _ordered(label(r) for r in ok)
    cols = _ordered(r.sequence for r in ok)
    cell = {(label(r), r.sequence): r.metrics.accuracy for r in ok}
    return rows, cols, [[cell.get((m, s)) for s in cols] for m in rows]


def _fmt(v):
    return "" if v is None else f"{v:.4f}"


def render_csv(results):
    rows, cols, values = accuracy_matrix(results)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["model"] + cols)
    for name, vals in zip(rows, values):
        writer.writerow([name] + [_fmt(v) for v in vals])
    return buf.getvalue()


def _md_table(header, rows):
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines)


def render_markdown(results):
    """Accuracy grid, per-model P/R/F1 on the best sequence, and ensemble accuracies."""
    ok = [r for r in results if r.status == "ok" and r.metrics is not None]
    base = [r for r in ok if not r.extra.get("ensemble")]
    ens = [r for r in ok if r.extra.get("ensemble")]
    parts = ["# Results", ""]

    rows, cols, values = accuracy_matrix(base)
    if rows:
        parts += ["## Accuracy by model and sequence", "",
                  _md_table(["Model"] + cols, [[n] + [_fmt(v) for v in vs] for n, vs in zip(rows, values)]), ""]
        detail = []
        for name in rows:
            cands = [r for r in base if r.model == name or _row_label(r) == name]
            best = max(cands, key=lambda r: (r.metrics.accuracy, -cols.index(r.sequence)))
            m = best.metrics
            detail.append([name, best.sequence, _fmt(m.accuracy), _fmt(m.precision), _fmt(m.recall), _fmt(m.f1)])
        parts += ["## Precision, recall and F1 (best sequence per model)", "",
                  _md_table(["Model", "Sequence", "Accuracy", "Precision", "Recall", "F1"], detail), ""]
    if ens:
        parts += ["## Ensembles", "",
                  _md_table(["Ensemble", "Sequence", "Accuracy", "F1"],
                            [[r.model, r.sequence, _fmt(r.metrics.accuracy), _fmt(r.metrics.f1)] for r in ens]), ""]
    failed = [r for r in results if r.status != "ok"]
    if failed:
        parts += ["## Failed cells", ""] + [f"- `{r.cell_id}`: {r.error}" for r in failed] + [""]
    return "\n".join(parts)


def atomic_write(path, text):
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise ReportError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def render_report(results, out_dir, meta=None, stem="results"):
    """Write ``<stem>.json``, ``<stem>.csv`` and ``<stem>.md``; returns the paths."""
    if not results:
        raise ValueError("no grid cells to report")
    out_dir = Path(out_dir)
    return {
        "json": atomic_write(out_dir / f"{stem}.json", results_to_json(results, meta)),
        "csv": atomic_write(out_dir / f"{stem}.csv", render_csv(results)),
        "markdown": atomic_write(out_dir / f"{stem}.md", render_markdown(results)),
    }
