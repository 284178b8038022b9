"""Scikit-learn style estimator facade over the EWMD fitting machinery.

Lets the curve fitting drop into sklearn pipelines and model-selection
tooling: hyperparameters live in ``__init__`` (so ``get_params`` /
``set_params`` / ``clone`` work), fitted state lands in trailing-underscore
attributes, and ``fit(X, y)`` takes cumulative population shares as X and
cumulative income shares as y.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .estimation import FitConfig, GroupedDataset, ewmd_fit
from .measures import EconomicContext, gini_closed, gini_numeric, measure_set


def _as_shares(X) -> np.ndarray:
    arr = check_array(X, ensure_2d=False, dtype=float)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(
                f"expected a single column of cumulative shares, got shape {arr.shape}"
            )
        arr = arr[:, 0]
    return arr


class LorenzCurveEstimator(BaseEstimator):
    """Fit a parametric Lorenz curve to grouped income-share data.

    Parameters
    ----------
    family : str, default="l3"
        Curve family tag: "kakwani1", "ortega", "l2", "l3", "gq" or
        (diagnostic only) "kakwani".
    mode : str, default="constrained"
        "constrained" keeps the search inside the genuine-curve domain;
        "diagnostic" allows breaches and certifies the result afterwards.
    multistart : int, default=16
        Number of optimizer starts (warm starts plus Latin hypercube).
    seed : int or None
        Seed for start-point sampling.

    Attributes
    ----------
    model_ : LorenzModel
        The fitted curve.
    rss_ : float
        Residual sum of squares on the training ordinates.
    validity_ : ValidityReport
        Analytic genuineness certificate of the fitted curve.
    result_ : FitResult
        Full fit record (winning start, iterations, convergence flag).
    """

    def __init__(self, family="l3", mode="constrained", multistart=16, seed=None):
        self.family = family
        self.mode = mode
        self.multistart = multistart
        self.seed = seed

    def fit(self, X, y):
        u = _as_shares(X)
        s = _as_shares(y)
        data = GroupedDataset(u=u, s=s)
        config = FitConfig(mode=self.mode, multistart=self.multistart, seed=self.seed)
        result = ewmd_fit(data, self.family, config)
        self.result_ = result
        self.model_ = result.model
        self.rss_ = result.rss
        self.validity_ = result.validity
        self.n_iter_ = result.iterations
        return self

    def predict(self, X):
        """Lorenz ordinates L(p) at the given population shares."""
        check_is_fitted(self, "model_")
        return self.model_.evaluate(_as_shares(X))

    def score(self, X, y):
        """Coefficient of determination of the predicted ordinates."""
        check_is_fitted(self, "model_")
        s = _as_shares(y)
        pred = self.predict(X)
        ss_res = float(np.sum((s - pred) ** 2))
        ss_tot = float(np.sum((s - s.mean()) ** 2))
        return 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0

    def gini(self):
        """Gini index of the fitted curve (closed form where available)."""
        check_is_fitted(self, "model_")
        try:
            return gini_closed(self.model_)
        except Exception:
            return gini_numeric(self.model_)

    def measures(self, mean, poverty_line):
        """All six poverty/inequality measures of the fitted curve."""
        check_is_fitted(self, "model_")
        return measure_set(self.model_, EconomicContext(mean, poverty_line))
