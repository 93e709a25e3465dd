"""Random forest for event classification, built from scratch.

Each tree is grown on a bootstrap sample with greedy Gini-impurity splits
over a random feature subset per node (ceil(sqrt(d)) by default). Trees are
binary; a sample goes left when x[feature] <= threshold. Prediction
averages the per-leaf rumor fraction across trees and ties break toward
news, the conservative call for a rumor alarm.

Feature importance is the impurity decrease accumulated per feature,
normalized per tree and averaged, then renormalized to sum to one. For
ranking, the per-interval columns of one base feature can be summed into a
single group.
"""

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .errors import DataError
from .validation import (
    as_float_matrix,
    as_label_array,
    check_fitted,
    check_matching_dim,
    check_two_classes,
)

RUMOR, NEWS = 0, 1


@dataclass
class TreeNode:
    """Internal node when feature >= 0, else a leaf carrying class counts
    (rumor, news)."""

    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    counts: np.ndarray | None = None

    @property
    def is_leaf(self):
        return self.feature < 0


def leaf(n_rumor, n_news):
    return TreeNode(counts=np.array([n_rumor, n_news], dtype=np.float64))


def _gini(counts):
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return 1.0 - float(np.sum(p * p))


def _best_split(X, y, feature_ids, min_leaf):
    """Best (feature, threshold, gain) over the candidate features, or None
    when no split separates distinct values with both children large
    enough."""
    n = y.size
    parent_counts = np.array([np.sum(y == RUMOR), np.sum(y == NEWS)], dtype=float)
    parent_gini = _gini(parent_counts)
    best_gain, best_feature, best_threshold = 0.0, -1, 0.0
    for f in feature_ids:
        v = X[:, f]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        ys = y[order]
        if vs[0] == vs[-1]:
            continue
        left_news = np.cumsum(ys[:-1] == NEWS)
        left_n = np.arange(1, n)
        left_rumor = left_n - left_news
        right_n = n - left_n
        right_news = parent_counts[NEWS] - left_news
        right_rumor = parent_counts[RUMOR] - left_rumor
        valid = (vs[1:] != vs[:-1]) & (left_n >= min_leaf) & (right_n >= min_leaf)
        if not np.any(valid):
            continue
        gini_left = 1.0 - (left_rumor**2 + left_news**2) / left_n**2
        gini_right = 1.0 - (right_rumor**2 + right_news**2) / right_n**2
        weighted = (left_n * gini_left + right_n * gini_right) / n
        gain = np.where(valid, parent_gini - weighted, -np.inf)
        k = int(np.argmax(gain))
        if gain[k] > best_gain + 1e-15:
            best_gain = float(gain[k])
            best_feature = int(f)
            best_threshold = (float(vs[k]) + float(vs[k + 1])) / 2.0
    if best_feature < 0:
        return None
    return best_feature, best_threshold, best_gain


def _grow_tree(X, y, rng, max_depth, min_leaf, n_candidates, importance, depth=0):
    counts = np.array([np.sum(y == RUMOR), np.sum(y == NEWS)], dtype=np.float64)
    if (
        counts[RUMOR] == 0
        or counts[NEWS] == 0
        or y.size < 2 * min_leaf
        or (max_depth is not None and depth >= max_depth)
    ):
        return TreeNode(counts=counts)
    feature_ids = rng.choice(X.shape[1], size=n_candidates, replace=False)
    feature_ids.sort()
    split = _best_split(X, y, feature_ids, min_leaf)
    if split is None:
        return TreeNode(counts=counts)
    f, thr, gain = split
    importance[f] += gain * y.size
    mask = X[:, f] <= thr
    node = TreeNode(feature=f, threshold=thr)
    node.left = _grow_tree(
        X[mask], y[mask], rng, max_depth, min_leaf, n_candidates, importance, depth + 1
    )
    node.right = _grow_tree(
        X[~mask], y[~mask], rng, max_depth, min_leaf, n_candidates, importance,
        depth + 1,
    )
    return node


def tree_rumor_fraction(node, x):
    """Walk one sample down a tree; returns the leaf's rumor fraction."""
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    total = node.counts.sum()
    return float(node.counts[RUMOR] / total) if total > 0 else 0.5


def forest_rumor_probability(trees, x):
    return float(np.mean([tree_rumor_fraction(t, x) for t in trees]))


class RandomForestRumorClassifier(ClassifierMixin, BaseEstimator):
    """Bagged Gini trees with per-node random feature subsets.

    Deterministic for a fixed seed: tree i draws from default_rng(seed + i).
    """

    def __init__(
        self,
        n_trees=350,
        max_depth=None,
        min_samples_leaf=2,
        features_per_split=None,
        seed=0,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.features_per_split = features_per_split
        self.seed = seed

    def fit(self, X, y):
        if self.n_trees < 1:
            raise DataError("n_trees must be >= 1")
        X = as_float_matrix(X)
        y = as_label_array(y)
        if y.size != X.shape[0]:
            raise DataError("X and y must have the same number of rows")
        check_two_classes(y)
        n, d = X.shape
        n_candidates = self.features_per_split or max(1, math.ceil(math.sqrt(d)))
        n_candidates = min(n_candidates, d)
        self.n_features_in_ = d
        self.classes_ = np.array(["rumor", "news"])
        self.trees_ = []
        importance = np.zeros(d)
        for i in range(self.n_trees):
            rng = np.random.default_rng(self.seed + i)
            idx = rng.choice(n, size=n, replace=True)
            tree_importance = np.zeros(d)
            tree = _grow_tree(
                X[idx],
                y[idx],
                rng,
                self.max_depth,
                self.min_samples_leaf,
                n_candidates,
                tree_importance,
            )
            self.trees_.append(tree)
            total = tree_importance.sum()
            if total > 0:
                importance += tree_importance / total
        grand = importance.sum()
        self.feature_importances_ = (
            importance / grand if grand > 0 else np.full(d, 1.0 / d)
        )
        return self

    def predict_proba(self, X):
        """Columns follow classes_: (p_rumor, p_news)."""
        check_fitted(self, "trees_")
        X = as_float_matrix(X)
        check_matching_dim(X, self.n_features_in_)
        p_rumor = np.array([forest_rumor_probability(self.trees_, x) for x in X])
        return np.column_stack([p_rumor, 1.0 - p_rumor])

    def predict(self, X):
        proba = self.predict_proba(X)
        return np.where(proba[:, 0] > 0.5, "rumor", "news")

    def grouped_importance(self, column_names, group_of=None):
        """Importance summed per base feature group, ranked descending."""
        check_fitted(self, "trees_")
        if len(column_names) != self.n_features_in_:
            raise DataError("column name count must match the trained width")
        from .dsts import base_feature_of_column

        group_of = group_of or base_feature_of_column
        totals = {}
        for name, imp in zip(column_names, self.feature_importances_):
            key = group_of(name)
            totals[key] = totals.get(key, 0.0) + float(imp)
        ranked = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))
        return ranked
