"""Base classifiers behind one train / predict / predict_proba contract."""

from .base import (
    CLASSES,
    DEFAULTS,
    KINDS,
    ClassifierSpec,
    LearnerError,
    Model,
    as_signs,
    check_training,
    load_model,
    model_from_dict,
    save_model,
    single_or_batch,
)
from .forest import RandomForest
from .knn import KNearestNeighbors
from .linear import LinearSVM, LogisticRegression
from .tree import DecisionTree

__all__ = [
    "CLASSES", "DEFAULTS", "KINDS", "ClassifierSpec", "LearnerError", "Model", "as_signs",
    "load_model", "model_from_dict", "save_model", "train", "predict", "predict_proba",
    "LogisticRegression", "LinearSVM", "DecisionTree", "RandomForest", "KNearestNeighbors",
]


def train(spec, X, y, sample_weights=None):
    """Fit the classifier described by ``spec``.

    ``X`` is a CSR matrix or a list of SparseVectors, ``y`` holds ±1 or
    ``Label`` values and ``sample_weights`` (optional) are non-negative weights
    summing to one.
    """
    if not isinstance(spec, ClassifierSpec):
        spec = ClassifierSpec(spec)
    X, y, ew = check_training(X, y, sample_weights)
    return Model.registry[spec.kind].fit(spec, X, y, ew)


def predict(model, X):
    return single_or_batch(X, model.predict(X))


def predict_proba(model, X):
    return single_or_batch(X, model.predict_proba(X))
