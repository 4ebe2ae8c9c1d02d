"""k-nearest neighbours under cosine similarity."""

import numpy as np
import scipy.sparse as sp

from .base import Model, csr_from_dict, csr_to_dict

_CHUNK = 512


def l2_normalize_rows(X):
    X = sp.csr_matrix(X, dtype=np.float64)
    norms = np.sqrt(np.asarray(X.multiply(X).sum(axis=1)).ravel())
    norms[norms == 0] = 1.0
    return sp.csr_matrix(sp.diags(1.0 / norms) @ X)


class KNearestNeighbors(Model):
    """Stores the (normalised) training rows; sample weights are ignored.

    Equal similarities are broken towards the lower training index, and a
    zero vector is at similarity 0 from everything.
    """

    kind = "KN"

    def __init__(self, spec, dimension, train, labels):
        super().__init__(spec, dimension)
        self.train = sp.csr_matrix(train)
        self.labels = np.asarray(labels, dtype=np.int64)

    @classmethod
    def fit(cls, spec, X, y, ew=None):
        return cls(spec, X.shape[1], l2_normalize_rows(X), y)

    def neighbors(self, X):
        """Indices of the k nearest training rows, nearest first, shape ``(n, k)``."""
        Q = l2_normalize_rows(self._matrix(X))
        k = min(self.spec.params["k"], self.train.shape[0])
        out = []
        for start in range(0, Q.shape[0], _CHUNK):
            sims = (Q[start:start + _CHUNK] @ self.train.T).toarray()
            out.append(np.argsort(-sims, axis=1, kind="stable")[:, :k])
        if not out:
            return np.zeros((0, k), dtype=np.int64)
        return np.vstack(out)

    def predict_proba(self, X):
        return (self.labels[self.neighbors(X)] == 1).mean(axis=1)

    def parameters(self):
        return {"train": csr_to_dict(self.train), "labels": self.labels.tolist()}

    @classmethod
    def from_parameters(cls, spec, dimension, params):
        return cls(spec, dimension, csr_from_dict(params["train"]), params["labels"])
