"""Random forest: bootstrap-bagged trees with a random feature subset per node."""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .._rng import Rng
from .base import Model
from .tree import grow_tree, tree_leaf_values


def _fit_tree(X, y, ew, params, seed, t, n_features):
    rng = Rng(seed, "forest", t)
    n = len(y)
    counts = np.bincount(rng.bootstrap(n), minlength=n).astype(np.float64)

    def sampler(present):
        if len(present) <= n_features:
            return present
        return sorted(rng.sample(present.tolist(), n_features))

    return grow_tree(X, y, ew * counts, params["max_depth"], params["min_leaf"], counts, sampler)


class RandomForest(Model):
    """``predict_proba`` is the fraction of trees voting hate, so it agrees with the majority vote."""

    kind = "RF"

    def __init__(self, spec, dimension, trees):
        super().__init__(spec, dimension)
        self.trees = trees

    @classmethod
    def fit(cls, spec, X, y, ew):
        p = spec.params
        n_features = p["max_features"] or math.ceil(math.sqrt(X.shape[1]))
        jobs = range(p["n_trees"])
        fit = lambda t: _fit_tree(X, y, ew, p, spec.seed, t, n_features)  # noqa: E731
        if p["workers"] > 1:
            with ThreadPoolExecutor(max_workers=p["workers"]) as pool:
                trees = list(pool.map(fit, jobs))
        else:
            trees = [fit(t) for t in jobs]
        return cls(spec, X.shape[1], trees)

    def tree_votes(self, X):
        """Per-tree predictions as a ``(n_trees, n)`` array of ±1."""
        X = self._matrix(X)
        return np.vstack([np.where(tree_leaf_values(t, X) > 0.5, 1, -1) for t in self.trees])

    def predict_proba(self, X):
        return (self.tree_votes(X) == 1).mean(axis=0)

    def parameters(self):
        return {"trees": [{k: v.tolist() for k, v in t.items()} for t in self.trees]}

    @classmethod
    def from_parameters(cls, spec, dimension, params):
        trees = [{k: np.asarray(v, dtype=np.float64 if k in ("threshold", "value") else np.int64)
                  for k, v in t.items()} for t in params["trees"]]
        return cls(spec, dimension, trees)
