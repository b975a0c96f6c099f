"""Scikit-learn compatible front end.

``SecureGBDTClassifier`` trains a gradient-boosted tree ensemble for
binary classification. ``mode="secure"`` runs the full two-party
protocol in-process (the feature columns are vertically partitioned
between two simulated parties); ``mode="mirror"`` runs the plaintext
fixed-point trainer that produces bit-identical trees; ``mode="exact"``
is a float64 baseline with true sigmoid, division-based gain and leaf
weights.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .data import Dataset, bin_features, vertical_split
from .reference import plain_train, predict_margins
from .ring import RingConfig
from .trainer import train_two_party
from .trees import TrainConfig, eval_plain_trees, merge_party_trees


class SecureGBDTClassifier(BaseEstimator, ClassifierMixin):
    """Gradient-boosted decision trees with an optional two-party secure path.

    Parameters:
        n_estimators: number of boosting rounds (trees).
        max_depth: depth of every (complete) tree.
        buckets: equal-width bins per feature; B-1 candidate thresholds.
        segments: lookup-table resolution for sigmoid and leaf weights.
        gamma: hessian regularizer.
        eta: learning rate (leaf weights are scaled by eta).
        ring_bits / frac_bits: fixed-point ring geometry.
        mode: "secure", "mirror" or "exact".
        n_features_p0: column count given to party 0 in secure mode
            (defaults to an even split).
        seed: protocol/dealer seed.
    """

    def __init__(
        self,
        n_estimators: int = 5,
        max_depth: int = 4,
        buckets: int = 8,
        segments: int = 12,
        gamma: float = 1.0,
        eta: float = 1.0,
        ring_bits: int = 64,
        frac_bits: int = 16,
        mode: str = "mirror",
        n_features_p0: int | None = None,
        seed: int = 0,
    ):
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.buckets = buckets
        self.segments = segments
        self.gamma = gamma
        self.eta = eta
        self.ring_bits = ring_bits
        self.frac_bits = frac_bits
        self.mode = mode
        self.n_features_p0 = n_features_p0
        self.seed = seed

    def _train_config(self) -> TrainConfig:
        return TrainConfig(
            trees=self.n_estimators,
            depth=self.max_depth,
            buckets=self.buckets,
            segments=self.segments,
            gamma=self.gamma,
            eta=self.eta,
            ring=RingConfig(self.ring_bits, self.frac_bits),
            seed=self.seed,
        )

    def fit(self, X, y):
        if self.mode not in ("secure", "mirror", "exact"):
            raise ValueError(f"unknown mode: {self.mode!r}")
        X, y = check_X_y(X, y)
        self.classes_ = np.unique(y)
        if self.classes_.size != 2:
            raise ValueError("binary classification only")
        y01 = (y == self.classes_[1]).astype(np.int64)

        cfg = self._train_config()
        thresholds = bin_features(X, self.buckets)
        if self.mode == "secure":
            ds = Dataset(X, y01, [f"f{j}" for j in range(X.shape[1])])
            d0, d1 = vertical_split(ds, thresholds, self.n_features_p0)
            t0, t1, _, _, m0, m1 = train_two_party(d0, d1, cfg)
            self.trees_ = [merge_party_trees(a, b, cfg.ring) for a, b in zip(t0, t1)]
            self.meters_ = (m0, m1)
            self._encoded = True
        else:
            self.trees_, _ = plain_train(X, y01, thresholds, cfg, self.mode)
            self._encoded = self.mode == "mirror"
        self.thresholds_ = thresholds
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X):
        check_is_fitted(self, "trees_")
        X = check_array(X)
        cfg = self._train_config()
        m = eval_plain_trees(self.trees_, X, self.thresholds_, cfg.ring, encoded=self._encoded)
        return self.eta * m if self.eta != 1.0 else m

    def predict_proba(self, X):
        p = 1.0 / (1.0 + np.exp(-self.decision_function(X)))
        return np.column_stack([1.0 - p, p])

    def predict(self, X):
        scores = self.decision_function(X)
        return self.classes_[(scores > 0).astype(int)]
