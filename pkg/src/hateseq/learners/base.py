"""Shared classifier contract.

Labels are signs: +1 is the inappropriate (hate) class, -1 is normal. Every
model exposes ``predict_proba`` (probability of +1) and ``predict``, and
``predict`` is always ``proba > 0.5`` so an exact 0.5 goes to normal.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..corpus import Label
from ..features import SparseVector, to_matrix

FORMAT_VERSION = 1
CLASSES = (-1, 1)
KINDS = ("LR", "SVM", "DT", "RF", "KN")

DEFAULTS = {
    "LR": {"learning_rate": 0.1, "l2": 1e-4, "epochs": 30, "batch_size": 64},
    "SVM": {"learning_rate": 0.1, "l2": 1e-4, "epochs": 30, "batch_size": 64},
    "DT": {"max_depth": 20, "min_leaf": 2},
    "RF": {"n_trees": 100, "max_depth": 20, "min_leaf": 2, "max_features": None, "workers": 1},
    "KN": {"k": 5},
}


class LearnerError(ValueError):
    pass


def _positive(name, value, integer=False, allow_zero=False):
    bad = value < 0 if allow_zero else value <= 0
    if integer and (not isinstance(value, (int, np.integer)) or isinstance(value, bool)):
        raise LearnerError(f"{name} must be an integer, got {value!r}")
    if bad or (isinstance(value, float) and not math.isfinite(value)):
        raise LearnerError(f"{name} out of range: {value!r}")


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        kind = str(self.kind).upper()
        if kind not in KINDS:
            raise LearnerError(f"unknown classifier kind {self.kind!r} (valid: {', '.join(KINDS)})")
        unknown = set(self.params) - set(DEFAULTS[kind])
        if unknown:
            raise LearnerError(f"{kind}: unknown hyperparameters {sorted(unknown)}")
        merged = {**DEFAULTS[kind], **self.params}
        if kind in ("LR", "SVM"):
            _positive("learning_rate", merged["learning_rate"])
            _positive("l2", merged["l2"], allow_zero=True)
            _positive("epochs", merged["epochs"], integer=True)
            _positive("batch_size", merged["batch_size"], integer=True)
        elif kind in ("DT", "RF"):
            _positive("max_depth", merged["max_depth"], integer=True)
            _positive("min_leaf", merged["min_leaf"], integer=True)
            if kind == "RF":
                _positive("n_trees", merged["n_trees"], integer=True)
                _positive("workers", merged["workers"], integer=True)
                if merged["max_features"] is not None:
                    _positive("max_features", merged["max_features"], integer=True)
        else:
            _positive("k", merged["k"], integer=True)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", merged)

    @classmethod
    def of(cls, kind, seed=0, **params):
        return cls(kind, params, seed)

    def with_seed(self, seed):
        return ClassifierSpec(self.kind, dict(self.params), seed)

    def to_dict(self):
        return {"kind": self.kind, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_dict(cls, data):
        return cls(data["kind"], dict(data.get("params", {})), data.get("seed", 0))


def as_signs(y):
    """Accept ±1 ints, ``Label`` members or label strings; return an int8 array."""
    out = []
    for v in y:
        if isinstance(v, Label):
            out.append(v.sign)
        elif isinstance(v, str):
            out.append(Label(v).sign)
        elif v in (1, -1):
            out.append(int(v))
        else:
            raise LearnerError(f"label {v!r} is not +1/-1 or a Label")
    return np.asarray(out, dtype=np.int64)


def check_training(X, y, sample_weights=None):
    X = to_matrix(X)
    y = as_signs(y)
    if X.shape[0] != len(y):
        raise LearnerError(f"{X.shape[0]} vectors but {len(y)} labels")
    if len(y) < 2:
        raise LearnerError("need at least two training examples")
    if not ((y == 1).any() and (y == -1).any()):
        raise LearnerError("training data contains a single class")
    return X, y, effective_weights(sample_weights, len(y))


def effective_weights(sample_weights, n):
    """Per-example multipliers with mean one; ``None`` and uniform weights give exactly ones."""
    if sample_weights is None:
        return np.ones(n)
    w = np.asarray(sample_weights, dtype=np.float64)
    if w.shape != (n,):
        raise LearnerError(f"expected {n} sample weights, got {w.shape[0] if w.ndim else 'a scalar'}")
    if not np.all(np.isfinite(w)) or (w < 0).any():
        raise LearnerError("sample weights must be finite and non-negative")
    total = w.sum()
    if total <= 0:
        raise LearnerError("sample weights sum to zero")
    if np.all(w == w[0]):
        return np.ones(n)
    return w * (n / total)


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    e = np.exp(z[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def csr_to_dict(m):
    m = sp.csr_matrix(m)
    return {"shape": list(m.shape), "data": m.data.tolist(),
            "indices": m.indices.tolist(), "indptr": m.indptr.tolist()}


def csr_from_dict(d):
    return sp.csr_matrix((np.asarray(d["data"], dtype=np.float64), np.asarray(d["indices"], dtype=np.int64),
                          np.asarray(d["indptr"], dtype=np.int64)), shape=tuple(d["shape"]))


class Model:
    """Base class; subclasses set ``dimension`` and implement ``predict_proba``."""

    kind = None
    registry = {}

    def __init_subclass__(cls, **kw):
        super().__init_subclass__(**kw)
        if cls.kind:
            Model.registry[cls.kind] = cls

    def __init__(self, spec, dimension):
        self.spec = spec
        self.dimension = dimension

    classes = CLASSES

    def _matrix(self, X):
        X = to_matrix(X, self.dimension)
        if X.shape[1] != self.dimension:
            raise LearnerError(f"dimension mismatch: model has {self.dimension}, input has {X.shape[1]}")
        return X

    def predict_proba(self, X):
        raise NotImplementedError

    def predict(self, X):
        return np.where(self.predict_proba(X) > 0.5, 1, -1)

    def class_probabilities(self, X):
        p = self.predict_proba(X)
        return np.column_stack([1.0 - p, p])

    def parameters(self):
        raise NotImplementedError

    @classmethod
    def from_parameters(cls, spec, dimension, params):
        raise NotImplementedError

    def to_dict(self):
        return {"version": FORMAT_VERSION, "kind": self.kind, "spec": self.spec.to_dict(),
                "classes": list(CLASSES), "dimension": self.dimension, "params": self.parameters()}


def model_from_dict(data):
    if data.get("version") != FORMAT_VERSION:
        raise LearnerError(f"unsupported model format version {data.get('version')!r}")
    cls = Model.registry.get(data.get("kind"))
    if cls is None:
        raise LearnerError(f"unknown model kind {data.get('kind')!r}")
    return cls.from_parameters(ClassifierSpec.from_dict(data["spec"]), data["dimension"], data["params"])


def save_model(model, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_dict(), fh)


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))


def single_or_batch(X, values):
    """Scalar result for a lone SparseVector, array otherwise."""
    if isinstance(X, SparseVector):
        return values[0].item()
    return values
