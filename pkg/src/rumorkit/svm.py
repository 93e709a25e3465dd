"""RBF-kernel SVM trained with simplified sequential minimal optimization.

This is the secondary baseline classifier; the forest is the primary model.
The solver sweeps for KKT violations, optimizes one Lagrange pair at a time
analytically, and stops after a few clean passes. If the iteration cap is
hit first, the best-so-far model is returned with converged_ = False.
"""

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


def rbf_kernel(A, B, gamma):
    a2 = np.sum(A * A, axis=1)[:, None]
    b2 = np.sum(B * B, axis=1)[None, :]
    d2 = np.maximum(a2 + b2 - 2.0 * (A @ B.T), 0.0)
    return np.exp(-gamma * d2)


class RbfSvmClassifier(ClassifierMixin, BaseEstimator):
    def __init__(self, C=3.0, gamma=0.2, tol=1e-3, max_passes=5, max_sweeps=200,
                 seed=0):
        self.C = C
        self.gamma = gamma
        self.tol = tol
        self.max_passes = max_passes
        self.max_sweeps = max_sweeps
        self.seed = seed

    def fit(self, X, y):
        X = as_float_matrix(X)
        labels = as_label_array(y)
        check_two_classes(labels)
        if labels.size != X.shape[0]:
            raise DataError("X and y must have the same number of rows")
        # rumor -> -1, news -> +1
        t = np.where(labels == 0, -1.0, 1.0)
        n = X.shape[0]
        K = rbf_kernel(X, X, self.gamma)
        alpha = np.zeros(n)
        b = 0.0
        rng = np.random.default_rng(self.seed)
        passes = 0
        sweeps = 0
        while passes < self.max_passes and sweeps < self.max_sweeps:
            changed = 0
            for i in range(n):
                e_i = float(alpha * t @ K[:, i]) + b - t[i]
                if not (
                    (t[i] * e_i < -self.tol and alpha[i] < self.C)
                    or (t[i] * e_i > self.tol and alpha[i] > 0)
                ):
                    continue
                j = int(rng.integers(n - 1))
                if j >= i:
                    j += 1
                e_j = float(alpha * t @ K[:, j]) + b - t[j]
                a_i_old, a_j_old = alpha[i], alpha[j]
                if t[i] != t[j]:
                    lo = max(0.0, a_j_old - a_i_old)
                    hi = min(self.C, self.C + a_j_old - a_i_old)
                else:
                    lo = max(0.0, a_i_old + a_j_old - self.C)
                    hi = min(self.C, a_i_old + a_j_old)
                if lo == hi:
                    continue
                eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
                if eta >= 0:
                    continue
                a_j = a_j_old - t[j] * (e_i - e_j) / eta
                a_j = min(hi, max(lo, a_j))
                if abs(a_j - a_j_old) < 1e-7:
                    continue
                a_i = a_i_old + t[i] * t[j] * (a_j_old - a_j)
                alpha[i], alpha[j] = a_i, a_j
                b1 = (
                    b - e_i
                    - t[i] * (a_i - a_i_old) * K[i, i]
                    - t[j] * (a_j - a_j_old) * K[i, j]
                )
                b2 = (
                    b - e_j
                    - t[i] * (a_i - a_i_old) * K[i, j]
                    - t[j] * (a_j - a_j_old) * K[j, j]
                )
                if 0 < a_i < self.C:
                    b = b1
                elif 0 < a_j < self.C:
                    b = b2
                else:
                    b = (b1 + b2) / 2.0
                changed += 1
            sweeps += 1
            passes = passes + 1 if changed == 0 else 0
        self.converged_ = passes >= self.max_passes
        support = alpha > 1e-10
        self.support_vectors_ = X[support]
        self.dual_coef_ = (alpha * t)[support]
        self.intercept_ = b
        self.n_features_in_ = X.shape[1]
        self.classes_ = np.array(["rumor", "news"])
        return self

    def decision_function(self, X):
        """Positive values side with news, negative with rumor."""
        check_fitted(self, "dual_coef_")
        X = as_float_matrix(X)
        check_matching_dim(X, self.n_features_in_)
        if self.support_vectors_.shape[0] == 0:
            return np.full(X.shape[0], self.intercept_)
        K = rbf_kernel(X, self.support_vectors_, self.gamma)
        return K @ self.dual_coef_ + self.intercept_

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0, "news", "rumor")
