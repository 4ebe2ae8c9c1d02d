"""Bagging, AdaBoost, hard/soft voting and out-of-fold stacking.

All combiners break ties towards the normal class. Member randomness comes
from streams derived from the ensemble seed and the member (or round, or
fold) index, so results do not depend on the order members are fitted in.
"""

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ._rng import Rng, derive_seed
from .learners import ClassifierSpec, Model, model_from_dict, train
from .learners.base import FORMAT_VERSION, check_training, sigmoid, single_or_batch

KINDS = ("BAGGING", "ADABOOST", "VOTE_HARD", "VOTE_SOFT", "STACKING")
MAX_REDRAWS = 10
EPS_FLOOR = 1e-12
ALPHA_CAP = 0.5 * math.log(1e12)


class EnsembleError(ValueError):
    pass


def _spec(s):
    return s if isinstance(s, ClassifierSpec) else ClassifierSpec(s)


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    base_specs: tuple
    meta_spec: ClassifierSpec = None
    k: int = 10
    folds: int = 5
    seed: int = 0
    weights: tuple = None
    workers: int = field(default=1, compare=False)

    def __post_init__(self):
        kind = str(self.kind).upper().replace("-", "_")
        if kind not in KINDS:
            raise EnsembleError(f"unknown ensemble kind {self.kind!r} (valid: {', '.join(KINDS)})")
        bases = self.base_specs
        if isinstance(bases, (ClassifierSpec, str)):
            bases = (bases,)
        bases = tuple(_spec(b) for b in bases)
        if not bases:
            raise EnsembleError("at least one base learner is required")
        if kind in ("BAGGING", "ADABOOST") and len(bases) != 1:
            raise EnsembleError(f"{kind} takes exactly one base learner, got {len(bases)}")
        if kind == "STACKING":
            if len(bases) < 2:
                raise EnsembleError("stacking needs at least two base learners")
            if self.folds < 2:
                raise EnsembleError("stacking needs folds >= 2")
        if self.k < 1:
            raise EnsembleError("k must be >= 1")
        if self.weights is not None and len(self.weights) != len(bases):
            raise EnsembleError(f"{len(self.weights)} voting weights for {len(bases)} models")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "base_specs", bases)
        meta = self.meta_spec
        if kind == "STACKING" and meta is None:
            meta = ClassifierSpec("LR")
        object.__setattr__(self, "meta_spec", _spec(meta) if meta is not None else None)
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    def to_dict(self):
        return {"kind": self.kind, "base_specs": [b.to_dict() for b in self.base_specs],
                "meta_spec": self.meta_spec.to_dict() if self.meta_spec else None,
                "k": self.k, "folds": self.folds, "seed": self.seed,
                "weights": list(self.weights) if self.weights is not None else None}

    @classmethod
    def from_dict(cls, d):
        meta = ClassifierSpec.from_dict(d["meta_spec"]) if d.get("meta_spec") else None
        return cls(d["kind"], tuple(ClassifierSpec.from_dict(b) for b in d["base_specs"]), meta,
                   d.get("k", 10), d.get("folds", 5), d.get("seed", 0),
                   tuple(d["weights"]) if d.get("weights") is not None else None)


def _map(fn, jobs, workers):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


def _dimension(X):
    return X.shape[1]


class _Combined(Model):
    """Common plumbing: the dimension check and the ``predict = proba > 0.5`` rule."""

    def to_dict(self):
        return {"version": FORMAT_VERSION, "kind": self.ensemble_kind, "spec": self.spec.to_dict(),
                "classes": [-1, 1], "dimension": self.dimension, "params": self.parameters()}


# --------------------------------------------------------------------------
# bagging

def bootstrap_indices(n, y, seed, member):
    """Bootstrap sample for bagging member ``member``; redrawn while it holds one class."""
    rng = Rng(seed, "bagging", member)
    for _ in range(MAX_REDRAWS + 1):
        idx = rng.bootstrap(n)
        labels = y[idx]
        if (labels == 1).any() and (labels == -1).any():
            return idx
    raise EnsembleError(f"bagging member {member}: every bootstrap sample had a single class "
                        f"after {MAX_REDRAWS} redraws")


class BaggingModel(_Combined):
    ensemble_kind = "BAGGING"

    def __init__(self, spec, dimension, members, samples=None):
        super().__init__(spec, dimension)
        self.members = list(members)
        self.samples = samples

    def member_votes(self, X):
        X = self._matrix(X)
        return np.vstack([m.predict(X) for m in self.members])

    def predict_proba(self, X):
        return (self.member_votes(X) == 1).mean(axis=0)

    def parameters(self):
        return {"members": [m.to_dict() for m in self.members]}


def bagging_fit(spec, X, y):
    X, y, _ = check_training(X, y)
    base = spec.base_specs[0]
    n = len(y)

    def fit(j):
        idx = bootstrap_indices(n, y, spec.seed, j)
        return idx, train(base.with_seed(derive_seed(spec.seed, "bagging-member", j)), X[idx], y[idx])

    results = _map(fit, range(spec.k), spec.workers)
    return BaggingModel(spec, _dimension(X), [m for _, m in results], [idx for idx, _ in results])


def bagging_predict(model, X):
    return single_or_batch(X, model.predict(X))


# --------------------------------------------------------------------------
# AdaBoost

@dataclass
class BoostState:
    phi: np.ndarray
    alphas: list = field(default_factory=list)
    hypotheses: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    phi_history: list = field(default_factory=list)
    stop_reason: str = "rounds"


def boost_alpha(eps):
    """``0.5 ln((1 - eps) / eps)``, capped for a (near-)perfect hypothesis."""
    if eps <= EPS_FLOOR:
        return ALPHA_CAP
    return 0.5 * math.log((1.0 - eps) / eps)


def _weak_learner(base, X, y, phi, seed, round_):
    spec = base.with_seed(derive_seed(seed, "boost", round_))
    if base.kind != "KN":
        return train(spec, X, y, phi)
    # k-NN ignores weights, so train on a weighted resample instead
    rng = Rng(seed, "boost-sample", round_)
    for _ in range(MAX_REDRAWS + 1):
        idx = rng.weighted_bootstrap(phi, len(y))
        if (y[idx] == 1).any() and (y[idx] == -1).any():
            return train(spec, X[idx], y[idx])
    raise EnsembleError(f"boosting round {round_}: weighted resample had a single class")


def adaboost_fit(spec, X, y):
    X, y, _ = check_training(X, y)
    base = spec.base_specs[0]
    n = len(y)
    state = BoostState(phi=np.full(n, 1.0 / n))
    state.phi_history.append(state.phi.copy())
    for j in range(spec.k):
        h = _weak_learner(base, X, y, state.phi, spec.seed, j)
        pred = h.predict(X)
        eps = float(state.phi[pred != y].sum())
        if eps >= 0.5:
            state.stop_reason = "chance"
            break
        alpha = boost_alpha(eps)
        phi = state.phi * np.exp(-alpha * pred * y)
        state.phi = phi / phi.sum()
        state.alphas.append(alpha)
        state.hypotheses.append(h)
        state.errors.append(eps)
        state.phi_history.append(state.phi.copy())
        if eps <= EPS_FLOOR:
            state.stop_reason = "perfect"
            break
    if not state.hypotheses:
        raise EnsembleError("no weak learner beat chance")
    return AdaBoostModel(spec, _dimension(X), state)


class AdaBoostModel(_Combined):
    """``predict_proba`` is ``sigmoid(2 F)`` where ``F = sum alpha_j h_j(x)``."""

    ensemble_kind = "ADABOOST"

    def __init__(self, spec, dimension, state):
        super().__init__(spec, dimension)
        self.state = state

    @property
    def alphas(self):
        return list(self.state.alphas)

    def score(self, X):
        X = self._matrix(X)
        F = np.zeros(X.shape[0])
        for a, h in zip(self.state.alphas, self.state.hypotheses):
            F += a * h.predict(X)
        return F

    def predict(self, X):
        return np.where(self.score(X) > 0, 1, -1)

    def predict_proba(self, X):
        return sigmoid(2.0 * self.score(X))

    def parameters(self):
        return {"alphas": list(self.state.alphas), "errors": list(self.state.errors),
                "hypotheses": [h.to_dict() for h in self.state.hypotheses]}


def adaboost_predict(model, X):
    return single_or_batch(X, model.predict(X))


# --------------------------------------------------------------------------
# voting

def _weights(weights, m):
    if weights is None:
        return np.ones(m)
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (m,):
        raise EnsembleError(f"{len(w)} voting weights for {m} models")
    if (w < 0).any() or w.sum() <= 0:
        raise EnsembleError("voting weights must be non-negative with a positive sum")
    return w


def combine_votes(votes, mode="hard", weights=None):
    """Combine per-model outputs of shape ``(models, n)``.

    ``votes`` holds ±1 labels for ``hard`` and positive-class probabilities
    for ``soft``. Returns the positive-class score in [0, 1]; the label is
    hate exactly when the score exceeds 0.5.
    """
    votes = np.atleast_2d(np.asarray(votes, dtype=np.float64))
    w = _weights(weights, votes.shape[0])
    if mode == "hard":
        return w @ (votes == 1) / w.sum()
    if mode == "soft":
        return w @ votes / w.sum()
    raise EnsembleError(f"unknown voting mode {mode!r} (hard or soft)")


class VotingModel(_Combined):
    def __init__(self, spec, dimension, members, mode, weights=None):
        super().__init__(spec, dimension)
        self.members = list(members)
        self.mode = mode
        self.weights = None if weights is None else tuple(weights)
        _weights(self.weights, len(self.members))

    @property
    def ensemble_kind(self):
        return "VOTE_" + self.mode.upper()

    def predict_proba(self, X):
        X = self._matrix(X)
        if self.mode == "hard":
            outputs = [m.predict(X) for m in self.members]
        else:
            outputs = [m.predict_proba(X) for m in self.members]
        return combine_votes(outputs, self.mode, self.weights)

    def parameters(self):
        return {"mode": self.mode, "weights": None if self.weights is None else list(self.weights),
                "members": [m.to_dict() for m in self.members]}


def vote_fit(spec, X, y):
    X, y, _ = check_training(X, y)
    mode = "hard" if spec.kind == "VOTE_HARD" else "soft"
    fit = lambda b: train(spec.base_specs[b].with_seed(derive_seed(spec.seed, "vote", b)), X, y)  # noqa: E731
    members = _map(fit, range(len(spec.base_specs)), spec.workers)
    return VotingModel(spec, _dimension(X), members, mode, spec.weights)


def vote_predict(models, X, mode="hard", weights=None):
    """Combine already-fitted ``models`` on ``X``."""
    if not models:
        raise EnsembleError("voting needs at least one model")
    voter = VotingModel(None, models[0].dimension, models, mode, weights)
    return single_or_batch(X, voter.predict(X))


# --------------------------------------------------------------------------
# stacking

def stratified_folds(y, folds, seed):
    """Fold number per row; each class is shuffled then dealt round-robin."""
    y = np.asarray(y)
    if len(y) < folds:
        raise EnsembleError(f"{len(y)} examples cannot fill {folds} folds")
    fold_of = np.empty(len(y), dtype=np.int64)
    offset = 0
    for label in (1, -1):
        rows = np.flatnonzero(y == label)
        rows = Rng(seed, "folds", label).shuffle(rows.tolist())
        fold_of[rows] = (np.arange(len(rows)) + offset) % folds
        offset += len(rows)
    return fold_of


@dataclass
class StackingAudit:
    """Which rows trained the model that produced each meta-feature column/fold."""

    fold_of: np.ndarray
    train_indices: dict

    def leak_free(self):
        for (b, f), rows in self.train_indices.items():
            if (self.fold_of[np.asarray(rows)] == f).any():
                return False
        return True

    def digest(self):
        return hashlib.sha256(self.fold_of.astype("<i8").tobytes()).hexdigest()


class StackingModel(_Combined):
    ensemble_kind = "STACKING"

    def __init__(self, spec, dimension, bases, meta, audit=None, meta_features=None):
        super().__init__(spec, dimension)
        self.bases = list(bases)
        self.meta = meta
        self.audit = audit
        self.meta_features = meta_features

    def base_probabilities(self, X):
        X = self._matrix(X)
        return np.column_stack([b.predict_proba(X) for b in self.bases])

    def predict_proba(self, X):
        return self.meta.predict_proba(sp.csr_matrix(self.base_probabilities(X)))

    def parameters(self):
        return {"bases": [b.to_dict() for b in self.bases], "meta": self.meta.to_dict(),
                "fold_digest": self.audit.digest() if self.audit else None}


def stacking_fit(spec, X, y):
    X, y, _ = check_training(X, y)
    folds = spec.folds
    fold_of = stratified_folds(y, folds, spec.seed)
    for f in range(folds):
        held = y[fold_of == f]
        rest = y[fold_of != f]
        if len(set(held.tolist())) < 2 or len(set(rest.tolist())) < 2:
            raise EnsembleError(f"stacking fold {f} has a single class; use fewer folds")
    B = len(spec.base_specs)
    meta_X = np.zeros((len(y), B))
    train_indices = {}

    def fit(job):
        b, f = job
        rows = np.flatnonzero(fold_of != f)
        seed = derive_seed(spec.seed, "stack", b, f)
        return rows, train(spec.base_specs[b].with_seed(seed), X[rows], y[rows])

    jobs = [(b, f) for b in range(B) for f in range(folds)]
    for (b, f), (rows, model) in zip(jobs, _map(fit, jobs, spec.workers)):
        held = np.flatnonzero(fold_of == f)
        meta_X[held, b] = model.predict_proba(X[held])
        train_indices[(b, f)] = tuple(rows.tolist())

    meta_spec = spec.meta_spec.with_seed(derive_seed(spec.seed, "meta"))
    meta = train(meta_spec, sp.csr_matrix(meta_X), y)
    refit = lambda b: train(spec.base_specs[b].with_seed(derive_seed(spec.seed, "stack-full", b)), X, y)  # noqa: E731
    bases = _map(refit, range(B), spec.workers)
    return StackingModel(spec, _dimension(X), bases, meta, StackingAudit(fold_of, train_indices), meta_X)


def stacking_predict(model, X):
    return single_or_batch(X, model.predict(X))


# --------------------------------------------------------------------------

_FITTERS = {"BAGGING": bagging_fit, "ADABOOST": adaboost_fit, "VOTE_HARD": vote_fit,
            "VOTE_SOFT": vote_fit, "STACKING": stacking_fit}


def fit_ensemble(spec, X, y):
    return _FITTERS[spec.kind](spec, X, y)


def ensemble_from_dict(data):
    """Rebuild a fitted ensemble for inference (training audits are not stored)."""
    if data.get("version") != FORMAT_VERSION:
        raise EnsembleError(f"unsupported ensemble format version {data.get('version')!r}")
    spec = EnsembleSpec.from_dict(data["spec"])
    dim, p = data["dimension"], data["params"]
    kind = data["kind"]
    if kind == "BAGGING":
        return BaggingModel(spec, dim, [model_from_dict(m) for m in p["members"]])
    if kind == "ADABOOST":
        state = BoostState(phi=np.array([]), alphas=list(p["alphas"]),
                           hypotheses=[model_from_dict(h) for h in p["hypotheses"]], errors=list(p["errors"]))
        return AdaBoostModel(spec, dim, state)
    if kind in ("VOTE_HARD", "VOTE_SOFT"):
        return VotingModel(spec, dim, [model_from_dict(m) for m in p["members"]], p["mode"], p["weights"])
    if kind == "STACKING":
        return StackingModel(spec, dim, [model_from_dict(b) for b in p["bases"]], model_from_dict(p["meta"]))
    raise EnsembleError(f"unknown ensemble kind {kind!r}")
