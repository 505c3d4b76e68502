"""Scikit-learn style wrappers around the boosting engine.

`BoostedTreesClassifier` is a plain GBDT with an optional per-row base margin;
`PriorBoostedClassifier` centers and scales externally computed prior scores,
installs them as base margins, and fits trees to the residual. The prior is
mandatory at inference time for the latter.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from . import engine
from ._validation import check_feature_matrix, check_margin_matrix

_PARAM_FIELDS = (
    "max_depth",
    "min_child_weight",
    "subsample",
    "learning_rate",
    "colsample_bylevel",
    "colsample_bytree",
    "gamma",
    "reg_lambda",
    "reg_alpha",
    "num_rounds",
    "min_child_samples",
    "subsample_freq",
)


def _resolve_objective(objective: str, n_classes: int) -> str:
    if objective == "auto":
        return engine.BINARY_LOGISTIC if n_classes == 2 else engine.MULTICLASS_SOFTMAX
    if objective not in engine.OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    return objective


class BoostedTreesClassifier(ClassifierMixin, BaseEstimator):
    """Gradient-boosted trees with exact greedy splits and a base-margin hook.

    Parameters mirror :class:`priorboost.engine.GbdtParams`; `objective`
    accepts "auto", "binary_logistic" or "multiclass_softmax".
    """

    def __init__(
        self,
        max_depth=6,
        min_child_weight=1.0,
        subsample=1.0,
        learning_rate=0.3,
        colsample_bylevel=1.0,
        colsample_bytree=1.0,
        gamma=0.0,
        reg_lambda=1.0,
        reg_alpha=0.0,
        num_rounds=20,
        min_child_samples=0,
        subsample_freq=1,
        objective="auto",
        random_state=0,
    ):
        self.max_depth = max_depth
        self.min_child_weight = min_child_weight
        self.subsample = subsample
        self.learning_rate = learning_rate
        self.colsample_bylevel = colsample_bylevel
        self.colsample_bytree = colsample_bytree
        self.gamma = gamma
        self.reg_lambda = reg_lambda
        self.reg_alpha = reg_alpha
        self.num_rounds = num_rounds
        self.min_child_samples = min_child_samples
        self.subsample_freq = subsample_freq
        self.objective = objective
        self.random_state = random_state

    def _engine_params(self) -> engine.GbdtParams:
        return engine.GbdtParams(**{name: getattr(self, name) for name in _PARAM_FIELDS})

    def fit(self, X, y, base_margin=None):
        X = check_feature_matrix(X)
        y = np.asarray(y)
        self.classes_, y_idx = np.unique(y, return_inverse=True)
        if len(self.classes_) < 2:
            raise ValueError("need at least 2 classes in y")
        self.n_features_in_ = X.shape[1]
        self.objective_ = _resolve_objective(self.objective, len(self.classes_))
        self.ensemble_ = engine.train(
            X,
            y_idx,
            self._engine_params(),
            self.objective_,
            len(self.classes_),
            base_margin=base_margin,
            seed=self.random_state,
        )
        return self

    def _check_fitted(self):
        if not hasattr(self, "ensemble_"):
            raise RuntimeError("estimator is not fitted; call fit first")

    def predict_margin(self, X, base_margin=None) -> np.ndarray:
        self._check_fitted()
        return engine.predict_margin(self.ensemble_, X, base_margin)

    def predict_proba(self, X, base_margin=None) -> np.ndarray:
        return engine.predict_proba(self.predict_margin(X, base_margin), self.objective_)

    def predict(self, X, base_margin=None) -> np.ndarray:
        proba = self.predict_proba(X, base_margin)
        return self.classes_[np.argmax(proba, axis=1)]


class PriorBoostedClassifier(ClassifierMixin, BaseEstimator):
    """GBDT seeded with scaled, centered prior scores (residual learning).

    `prior_scores` is an (n_rows, n_classes) matrix of raw transformer scores
    aligned positionally with X; it must be supplied to both `fit` and the
    predict methods. `scale=0` reproduces the plain GBDT exactly.
    """

    def __init__(
        self,
        scale=1.0,
        center_axis="row",
        max_depth=6,
        min_child_weight=1.0,
        subsample=1.0,
        learning_rate=0.3,
        colsample_bylevel=1.0,
        colsample_bytree=1.0,
        gamma=0.0,
        reg_lambda=1.0,
        reg_alpha=0.0,
        num_rounds=20,
        min_child_samples=0,
        subsample_freq=1,
        objective="auto",
        random_state=0,
    ):
        self.scale = scale
        self.center_axis = center_axis
        self.max_depth = max_depth
        self.min_child_weight = min_child_weight
        self.subsample = subsample
        self.learning_rate = learning_rate
        self.colsample_bylevel = colsample_bylevel
        self.colsample_bytree = colsample_bytree
        self.gamma = gamma
        self.reg_lambda = reg_lambda
        self.reg_alpha = reg_alpha
        self.num_rounds = num_rounds
        self.min_child_samples = min_child_samples
        self.subsample_freq = subsample_freq
        self.objective = objective
        self.random_state = random_state

    def _margins(self, prior_scores, n_rows, n_classes) -> np.ndarray:
        from .fusion import center_matrix, scale_to_margins, validate_scale

        validate_scale(self.scale)
        scores = check_margin_matrix(
            prior_scores, n_rows, n_classes, name="prior_scores"
        )
        centered = center_matrix(scores, axis=self.center_axis)
        return scale_to_margins(centered, self.scale, self.objective_)

    def fit(self, X, y, prior_scores):
        X = check_feature_matrix(X)
        y = np.asarray(y)
        self.classes_, y_idx = np.unique(y, return_inverse=True)
        if len(self.classes_) < 2:
            raise ValueError("need at least 2 classes in y")
        self.n_features_in_ = X.shape[1]
        self.objective_ = _resolve_objective(self.objective, len(self.classes_))
        params = engine.GbdtParams(**{name: getattr(self, name) for name in _PARAM_FIELDS})
        margins = self._margins(prior_scores, len(X), len(self.classes_))
        self.ensemble_ = engine.train(
            X,
            y_idx,
            params,
            self.objective_,
            len(self.classes_),
            base_margin=margins,
            seed=self.random_state,
            base_margin_source=engine.EXTERNAL_MARGIN,
        )
        return self

    def predict_proba(self, X, prior_scores) -> np.ndarray:
        if not hasattr(self, "ensemble_"):
            raise RuntimeError("estimator is not fitted; call fit first")
        X = check_feature_matrix(X)
        margins = self._margins(prior_scores, len(X), len(self.classes_))
        out = engine.predict_margin(self.ensemble_, X, margins)
        return engine.predict_proba(out, self.objective_)

    def predict(self, X, prior_scores) -> np.ndarray:
        proba = self.predict_proba(X, prior_scores)
        return self.classes_[np.argmax(proba, axis=1)]
