"""Grid execution: corpus -> sequence -> features -> model -> metrics -> reports."""

import dataclasses
import hashlib
import json
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .._rng import derive_seed
from ..corpus import binarize, combine, load_dataset, split
from ..ensemble import fit_ensemble
from ..evalreport import CellResult, confusion, evaluate, metrics, per_class, render_report
from ..features import Vectorizer
from ..learners import train
from ..pipeline import check_sequence, parse_sequence, run_pipeline
from ..textprep.lexicon import LexiconSet

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cell:
    sequence: object  # pipeline.Sequence
    vectorizer: str
    model: str
    spec: object  # ClassifierSpec or EnsembleSpec
    ensemble: object = None  # config.EnsembleEntry

    @property
    def cell_id(self):
        return f"{self.sequence.alias}|{self.vectorizer}|{self.model}"


@dataclass
class RunOutcome:
    results: list
    paths: dict
    exit_code: int


@dataclass
class Features:
    X_train: object
    X_val: object
    X_test: object
    y_train: np.ndarray
    y_val: np.ndarray
    y_test: np.ndarray
    vocabulary: object


def plan_cells(config):
    cells = []
    for seq in config.sequences:
        for vec in config.vectorizers:
            for spec in config.models:
                cells.append(Cell(seq, vec, spec.kind, spec))
    for entry in config.ensembles:
        for alias in config.ensemble_sequences:
            seq = parse_sequence(alias)
            for vec in config.vectorizers:
                cells.append(Cell(seq, vec, entry.name, entry.spec, entry))
    return cells


def load_corpus(config):
    corpora = []
    for d in config.datasets:
        raw = load_dataset(d.resolved(), d.format)
        corpora.append(binarize(raw))
    return combine(corpora)


def _digest(obj):
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode("utf-8")).hexdigest()[:16]


def _cell_digest(config, cell):
    return _digest({
        "datasets": [[d.path, d.format] for d in config.datasets],
        "split": list(config.split), "seed": config.seed, "stages": cell.sequence.roman(),
        "vectorizer": cell.vectorizer, "min_df": config.min_df, "max_features": config.max_features,
        "spell": config.spell_correct, "model": cell.spec.to_dict(),
        "weights": "validation" if cell.ensemble and cell.ensemble.weights_from_validation else None,
    })


class _Cache:
    """Per-key lazily computed values, each computed once even under threads."""

    def __init__(self, fn):
        self.fn = fn
        self.values = {}
        self.locks = {}
        self.guard = threading.Lock()

    def get(self, key):
        with self.guard:
            lock = self.locks.setdefault(key, threading.Lock())
        with lock:
            if key not in self.values:
                self.values[key] = self.fn(key)
            return self.values[key]


class Experiment:
    def __init__(self, config, lexicons, parts):
        self.config = config
        self.lex = lexicons
        self.parts = parts
        self.timings = {}
        self._sequences = {}
        self.processed = _Cache(self._preprocess)
        self.features = _Cache(self._vectorize)

    def register(self, seq):
        self._sequences.setdefault(seq.alias, seq)

    def _preprocess(self, alias):
        seq = self._sequences[alias]
        t = time.perf_counter()
        out = tuple(run_pipeline(seq, part, self.lex, spell=self.config.spell_correct) for part in self.parts)
        self.timings[f"preprocess:{alias}"] = round(time.perf_counter() - t, 4)
        return out

    def _vectorize(self, key):
        alias, kind = key
        train_c, val_c, test_c = self.processed.get(alias)
        vec = Vectorizer(kind, self.config.min_df, self.config.max_features).fit(train_c)
        return Features(vec.transform(train_c), vec.transform(val_c), vec.transform(test_c),
                        np.asarray(train_c.signs), np.asarray(val_c.signs), np.asarray(test_c.signs),
                        vec.vocabulary)

    def run_cell(self, cell):
        cfg = self.config
        seed = derive_seed(cfg.seed, cell.cell_id)
        result = CellResult(cell.cell_id, cell.sequence.alias, cell.vectorizer, cell.model, seed,
                            _cell_digest(cfg, cell), extra={"ensemble": cell.ensemble is not None,
                                                            "stages": cell.sequence.roman()})
        try:
            if cfg.strict_constraints:
                check_sequence(cell.sequence, strict=True)
            f = self.features.get((cell.sequence.alias, cell.vectorizer))
            t = time.perf_counter()
            if cell.ensemble is None:
                model = train(cell.spec.with_seed(seed), f.X_train, f.y_train)
            else:
                model = fit_ensemble(dataclasses.replace(cell.spec, seed=seed), f.X_train, f.y_train)
                if cell.ensemble.weights_from_validation and len(f.y_val):
                    accs = [float(np.mean(m.predict(f.X_val) == f.y_val)) for m in model.members]
                    model.weights = tuple(accs) if sum(accs) > 0 else None
                    result.extra["weights"] = accs
            result.timings["train_s"] = round(time.perf_counter() - t, 4)
            t = time.perf_counter()
            pred = model.predict(f.X_test)
            result.timings["predict_s"] = round(time.perf_counter() - t, 4)
            cm = confusion(pred, f.y_test)
            result.metrics = metrics(cm)
            result.per_class = per_class(cm)
            if len(f.y_val):
                result.validation = evaluate(model.predict(f.X_val), f.y_val)
            result.extra.update({"n_train": int(f.X_train.shape[0]), "n_validation": int(len(f.y_val)),
                                 "n_test": int(f.X_test.shape[0]), "vocabulary_size": len(f.vocabulary)})
        except Exception as exc:  # recorded in the report, the grid carries on
            log.warning("cell %s failed: %s", cell.cell_id, exc)
            result.status = "failed"
            result.error = f"{type(exc).__name__}: {exc}"
        return result


def _failed(config, cells, message):
    return [CellResult(c.cell_id, c.sequence.alias, c.vectorizer, c.model, derive_seed(config.seed, c.cell_id),
                       _cell_digest(config, c), status="failed", error=message,
                       extra={"ensemble": c.ensemble is not None, "stages": c.sequence.roman()})
            for c in cells]


def run_experiment(config, out_dir=None):
    """Run the whole grid and write ``results.{json,csv,md}`` into the output directory."""
    out_dir = Path(out_dir or config.output)
    cells = plan_cells(config)
    meta = {"config": config.as_dict(), "timings": {}}
    t0 = time.perf_counter()
    try:
        directory, paths = config.lexicon_paths()
        lex = LexiconSet.load(directory, paths)
        corpus = load_corpus(config)
        parts = split(corpus, config.split, seed=config.seed)
    except Exception as exc:
        log.error("setup failed: %s", exc)
        results = _failed(config, cells, f"{type(exc).__name__}: {exc}")
        meta["error"] = str(exc)
    else:
        meta["corpus"] = {"documents": len(corpus),
                          "classes": {k.value: v for k, v in corpus.class_counts.items()},
                          "split": [len(parts.train), len(parts.validation), len(parts.test)]}
        exp = Experiment(config, lex, (parts.train, parts.validation, parts.test))
        for c in cells:
            exp.register(c.sequence)
        if not config.strict_constraints:
            for seq in exp._sequences.values():
                check_sequence(seq)
        if config.workers > 1:
            with ThreadPoolExecutor(max_workers=config.workers) as pool:
                results = list(pool.map(exp.run_cell, cells))
        else:
            results = [exp.run_cell(c) for c in cells]
        meta["timings"].update(sorted(exp.timings.items()))
    meta["timings"]["total_s"] = round(time.perf_counter() - t0, 4)
    n_ok = sum(r.status == "ok" for r in results)
    meta["cells"] = {"total": len(results), "ok": n_ok, "failed": len(results) - n_ok}
    paths = render_report(results, out_dir, meta)
    return RunOutcome(results, paths, 0 if n_ok else 1)


def strip_timings(report):
    """A parsed JSON report with every timing field removed (for rerun comparisons)."""
    report = json.loads(json.dumps(report))
    report.get("meta", {}).pop("timings", None)
    for cell in report.get("cells", []):
        cell.pop("timings", None)
    return report
