"""Stratified cross-validation with event-level folds.

Fold assignment is a pure function of (seed, event id list, labels), never
of feature values, and every event's tweets stay on one side of each
train/test boundary because splitting happens at the event level.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .validation import as_label_array


@dataclass
class CvResult:
    fold_of: np.ndarray          # fold index per row
    fold_accuracies: list
    mean_accuracy: float
    predicted: np.ndarray        # out-of-fold predicted labels
    p_rumor: np.ndarray          # out-of-fold rumor probabilities


def assign_folds(event_ids, labels, folds, seed):
    """Stratified round-robin after a seeded per-class shuffle; per-fold
    class balance is within one sample."""
    y = as_label_array(labels)
    n = len(event_ids)
    if len(y) != n:
        raise DataError("event_ids and labels must align")
    fold_of = np.empty(n, dtype=np.int64)
    rng = np.random.default_rng(seed)
    for cls in (0, 1):
        positions = np.flatnonzero(y == cls)
        if positions.size < folds:
            raise DataError(
                f"need at least {folds} samples per class, got {positions.size}"
            )
        shuffled = positions[rng.permutation(positions.size)]
        for j, pos in enumerate(shuffled):
            fold_of[pos] = j % folds
    return fold_of


def cross_validate(X, y, event_ids, make_model, folds=10, seed=0):
    """Out-of-fold evaluation; `make_model` returns a fresh unfitted
    estimator for every fold."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    fold_of = assign_folds(event_ids, y, folds, seed)
    predicted = np.empty(len(y), dtype=object)
    p_rumor = np.zeros(len(y))
    fold_accuracies = []
    for fold in range(folds):
        test = fold_of == fold
        train = ~test
        model = make_model()
        model.fit(X[train], y[train])
        pred = model.predict(X[test])
        predicted[test] = pred
        proba = getattr(model, "predict_proba", None)
        if proba is not None:
            p_rumor[test] = model.predict_proba(X[test])[:, 0]
        else:
            p_rumor[test] = (pred == "rumor").astype(float)
        fold_accuracies.append(float(np.mean(pred == y[test])))
    mean_accuracy = float(np.mean(fold_accuracies))
    return CvResult(
        fold_of=fold_of,
        fold_accuracies=fold_accuracies,
        mean_accuracy=mean_accuracy,
        predicted=predicted.astype(str),
        p_rumor=p_rumor,
    )
