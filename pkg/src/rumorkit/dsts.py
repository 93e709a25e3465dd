"""Time-series vector assembly: per-event z-score normalization across
intervals plus slope blocks between consecutive intervals.

The vector for one event is the row-major concatenation of N normalized
feature rows followed by N slope rows, so its length is exactly 2*D*N.
The final slope row has no successor interval and is zero. When a cutoff
mask is present, the normalization statistics use only the observed
intervals and everything after the cutoff stays zero.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import DataError


@dataclass
class IntervalFeatureMatrix:
    """Per-interval feature values for one event, in catalog column order."""

    event_id: str
    values: np.ndarray  # shape (N, D)
    feature_names: list
    interval_hours: float
    label: str | None = None
    observed: np.ndarray | None = None  # per-interval mask; None = all observed
    cutoff_hours: float | None = None
    empty_intervals: np.ndarray | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise DataError("feature matrix must be 2-dimensional")
        if not np.all(np.isfinite(self.values)):
            raise DataError(f"event {self.event_id}: non-finite feature values")
        if self.values.shape[1] != len(self.feature_names):
            raise DataError("feature name count must match matrix columns")
        if self.observed is None:
            self.observed = np.ones(self.values.shape[0], dtype=bool)
        else:
            self.observed = np.asarray(self.observed, dtype=bool)


def observed_interval_count(n_intervals, interval_hours, cutoff_hours):
    """Intervals whose start lies before the cutoff (the boundary interval
    counts as observed when the cutoff falls inside it)."""
    if cutoff_hours is None:
        return n_intervals
    k = int(np.ceil(cutoff_hours / interval_hours))
    return max(1, min(n_intervals, k))


def zscore_normalize(values, observed=None):
    """Per-column z-score over an event's intervals, population standard
    deviation. Constant columns map to zeros; masked rows stay zero and do
    not contribute to the statistics."""
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    if observed is None:
        observed = np.ones(n, dtype=bool)
    out = np.zeros_like(values)
    rows = values[observed]
    if rows.shape[0] == 0:
        return out
    mean = rows.mean(axis=0)
    std = rows.std(axis=0)  # population sigma
    nonconst = std > 0
    centered = values[observed][:, nonconst] - mean[nonconst]
    sub = np.zeros_like(rows)
    sub[:, nonconst] = centered / std[nonconst]
    out[observed] = sub
    return out


def slope_blocks(values, interval_hours, observed=None):
    """Row t holds (row[t+1] - row[t]) / interval length in hours; the last
    row (and any row whose successor is unobserved) is zero."""
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    if observed is None:
        observed = np.ones(n, dtype=bool)
    out = np.zeros_like(values)
    if n >= 2:
        diff = (values[1:] - values[:-1]) / interval_hours
        keep = observed[1:] & observed[:-1]
        out[:-1][keep] = diff[keep]
    return out


def build_dsts_vector(matrix, normalize=True):
    """Flatten one IntervalFeatureMatrix into its classification vector."""
    base = (
        zscore_normalize(matrix.values, matrix.observed)
        if normalize
        else np.where(matrix.observed[:, None], matrix.values, 0.0)
    )
    slopes = slope_blocks(base, matrix.interval_hours, matrix.observed)
    return np.concatenate([base.ravel(), slopes.ravel()])


def dsts_column_names(feature_names, n_intervals):
    cols = [
        f"f_{name}_t{t}" for t in range(n_intervals) for name in feature_names
    ]
    cols += [
        f"s_{name}_t{t}" for t in range(n_intervals) for name in feature_names
    ]
    return cols


def base_feature_of_column(column):
    """Strip the block prefix and interval suffix: f_Capital_t3 -> Capital."""
    name = column
    if name.startswith(("f_", "s_")):
        name = name[2:]
    if "_t" in name:
        head, _, tail = name.rpartition("_t")
        if tail.isdigit():
            name = head
    return name


class DstsTransformer(TransformerMixin, BaseEstimator):
    """Estimator-style wrapper turning interval feature matrices into the
    flat time-series vectors. Stateless; fit only records the layout."""

    def __init__(self, normalize=True):
        self.normalize = normalize

    def fit(self, matrices, y=None):
        self.feature_names_ = list(matrices[0].feature_names) if matrices else []
        self.n_intervals_ = matrices[0].values.shape[0] if matrices else 0
        return self

    def transform(self, matrices):
        rows = [build_dsts_vector(m, normalize=self.normalize) for m in matrices]
        return np.array(rows) if rows else np.empty((0, 0))

    def column_names(self):
        if not getattr(self, "feature_names_", None):
            raise DataError("transformer has not seen any matrices")
        return dsts_column_names(self.feature_names_, self.n_intervals_)
