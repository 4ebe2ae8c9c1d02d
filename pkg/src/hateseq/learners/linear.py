"""Logistic regression and linear SVM trained by mini-batch gradient descent."""

import numpy as np

from .._rng import Rng
from .base import Model, sigmoid


def _logistic_grad(y, margin):
    # d/dm of log(1 + exp(-y m))
    return -y * sigmoid(-y * margin)


def _hinge_grad(y, margin):
    return np.where(y * margin < 1.0, -y, 0.0).astype(np.float64)


def fit_linear(X, y, ew, params, seed, loss):
    """Weighted mean loss over each batch plus ``l2/2 * |w|^2``; returns ``(w, b)``.

    Batch order is reshuffled every epoch from the spec seed.
    """
    grad_fn = _logistic_grad if loss == "log" else _hinge_grad
    n, dim = X.shape
    w = np.zeros(dim)
    b = 0.0
    lr, l2, bs = params["learning_rate"], params["l2"], params["batch_size"]
    yf = y.astype(np.float64)
    rng = Rng(seed, "linear", loss)
    for _ in range(params["epochs"]):
        order = rng.permutation(n)
        for start in range(0, n, bs):
            idx = order[start:start + bs]
            Xb = X[idx]
            g = grad_fn(yf[idx], Xb @ w + b) * ew[idx]
            grad_w = Xb.T @ g / len(idx) + l2 * w
            w -= lr * grad_w
            b -= lr * float(g.mean())
    return w, b


class LinearModel(Model):
    loss = None

    def __init__(self, spec, dimension, weights, bias):
        super().__init__(spec, dimension)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = float(bias)

    @classmethod
    def fit(cls, spec, X, y, ew):
        w, b = fit_linear(X, y, ew, spec.params, spec.seed, cls.loss)
        return cls(spec, X.shape[1], w, b)

    def decision_function(self, X):
        return self._matrix(X) @ self.weights + self.bias

    def predict_proba(self, X):
        return sigmoid(self.decision_function(X))

    def parameters(self):
        return {"weights": self.weights.tolist(), "bias": self.bias}

    @classmethod
    def from_parameters(cls, spec, dimension, params):
        return cls(spec, dimension, params["weights"], params["bias"])


class LogisticRegression(LinearModel):
    kind = "LR"
    loss = "log"


class LinearSVM(LinearModel):
    """Hinge loss. ``predict_proba`` is sigmoid(margin), an uncalibrated stand-in."""

    kind = "SVM"
    loss = "hinge"
