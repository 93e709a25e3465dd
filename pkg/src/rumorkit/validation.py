"""Input validation helpers used by the estimator classes."""

import numpy as np
from sklearn.exceptions import NotFittedError

from .errors import DataError

CLASSES = ("rumor", "news")


def as_float_matrix(X, name="X"):
    """Coerce to a 2-D float64 array and reject non-finite entries."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DataError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains NaN or infinite values")
    return arr


def as_label_array(y, name="y"):
    """Coerce labels to the canonical integer coding (rumor=0, news=1)."""
    out = []
    for v in np.asarray(y).ravel():
        if isinstance(v, (np.integer, int)) and v in (0, 1):
            out.append(int(v))
        elif str(v) in CLASSES:
            out.append(CLASSES.index(str(v)))
        else:
            raise DataError(f"{name} contains unknown label {v!r}")
    return np.asarray(out, dtype=np.int64)


def check_two_classes(y, name="y"):
    if len(np.unique(y)) < 2:
        raise DataError(f"{name} must contain both classes")


def check_fitted(estimator, attribute):
    if getattr(estimator, attribute, None) is None:
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted; call fit() first"
        )


def check_matching_dim(X, expected, name="X"):
    if X.shape[1] != expected:
        raise DataError(
            f"{name} has {X.shape[1]} columns, model was fitted with {expected}"
        )
