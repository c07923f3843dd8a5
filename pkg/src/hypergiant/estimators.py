"""scikit-learn style wrappers around the functional core.

The library itself is functional; these classes let the predictions and
component statistics sit in sklearn pipelines and be inspected with
``get_params``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .components import components
from .hypergraph import Hypergraph
from .stats import linear_response
from .theory import giant_variance, solve_rho


class GiantComponentModel(BaseEstimator):
    """Predicts the mean and variance of L(H_d(n, p)) from a column of n values.

    ``fit`` solves for rho once; ``predict`` returns (1 - rho) n.
    """

    def __init__(self, d: int = 2, c: float = 2.0, tol: float = 1e-12):
        self.d = d
        self.c = c
        self.tol = tol

    def fit(self, X=None, y=None):
        self.rho_ = solve_rho(self.c, self.d, self.tol)
        return self

    def _n(self, X) -> np.ndarray:
        check_is_fitted(self, "rho_")
        return check_array(X, ensure_2d=False, dtype=np.float64).reshape(-1)

    def predict(self, X) -> np.ndarray:
        n = self._n(X)
        return (1.0 - self.rho_) * n

    def predict_variance(self, X) -> np.ndarray:
        n = self._n(X)
        return giant_variance(self.rho_, self.c, self.d, n)


class ComponentOrderTransformer(TransformerMixin, BaseEstimator):
    """Maps a sequence of hypergraphs to rows (largest order, component count, second order)."""

    def __init__(self, normalize: bool = False):
        self.normalize = normalize

    def fit(self, X, y=None):
        self.n_features_out_ = 3
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "n_features_out_")
        rows = []
        for h in X:
            if not isinstance(h, Hypergraph):
                raise TypeError("ComponentOrderTransformer expects Hypergraph objects")
            s = components(h)
            second = int(s.sizes[1]) if s.count > 1 else 0
            row = [s.largest_order, s.count, second]
            rows.append([v / h.n for v in row] if self.normalize else row)
        return np.asarray(rows, dtype=np.float64).reshape(-1, 3)


class LinearResponseRegressor(RegressorMixin, BaseEstimator):
    """Weighted linear fit of S_G on n1 - mu1, grouped by distinct n1.

    ``X`` is a single column of n1 values and ``y`` the matching S_G.
    """

    def __init__(self, mu1: float = 0.0):
        self.mu1 = mu1

    def fit(self, X, y):
        x = check_array(X, ensure_2d=False, dtype=np.float64).reshape(-1)
        y = np.asarray(y, dtype=np.float64).reshape(-1)
        if x.shape != y.shape:
            raise ValueError("X and y differ in length")
        groups = {}
        for key in np.unique(x):
            groups[int(key)] = y[x == key]
        self.response_ = linear_response(groups, self.mu1)
        self.intercept_ = self.response_.mu_S_hat
        self.coef_ = np.array([self.response_.lambda_S_hat])
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "response_")
        x = check_array(X, ensure_2d=False, dtype=np.float64).reshape(-1)
        return self.intercept_ + self.coef_[0] * (x - self.mu1)
