"""Pipeline assembly: raw-feature estimators and the common fit/predict API.

Every estimator exposes ``fit(epochs) -> self``, ``predict_proba(epochs)``
returning one simplex row per trial with columns ordered by ``classes_``,
and ``predict(epochs)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dsp import Epochs
from ..errors import DegenerateLabels
from .csp import (
    FilterBankCsp,
    class_mean_covariances,
    csp_fit,
    csp_logvar,
    logvar_features,
    trcsp_fit,
)


@dataclass(frozen=True)
class PipelineSpec:
    """A catalog pipeline plus the hyperparameter grid to search.

    ``grid`` maps hyperparameter names to candidate tuples; candidate
    enumeration (and therefore tie-breaking) follows declaration order.
    """

    name: str
    paradigm: str
    grid: dict = field(default_factory=dict)


class FeatureClassifier:
    """Tabular features extracted per trial, classified by a linear head."""

    def __init__(self, feature_fn, head):
        self.feature_fn = feature_fn
        self.head = head

    def fit(self, epochs: Epochs) -> "FeatureClassifier":
        self.head.fit(self.feature_fn(epochs), epochs.labels)
        self.classes_ = self.head.classes_
        return self

    def predict_proba(self, epochs: Epochs) -> np.ndarray:
        return self.head.predict_proba(self.feature_fn(epochs))

    def predict(self, epochs: Epochs) -> np.ndarray:
        return self.classes_[np.argmax(self.predict_proba(epochs), axis=1)]


class CspClassifier:
    """CSP (optionally Tikhonov-regularized) log-variance features + head.

    The core decomposition is two-condition; multiclass problems train one
    filter bank and head per class against the pooled rest, renormalizing
    the per-class scores.  ``nfilter`` is capped at the channel count.
    """

    def __init__(self, head_factory, nfilter: int = 4, alpha: float | None = None,
                 estimator: str = "scm"):
        self.head_factory = head_factory
        self.nfilter = nfilter
        self.alpha = alpha
        self.estimator = estimator

    def _fit_bank(self, cov_a, cov_b, nfilter):
        if self.alpha is None:
            return csp_fit(cov_a, cov_b, nfilter)
        return trcsp_fit(cov_a, cov_b, nfilter, self.alpha)

    def fit(self, epochs: Epochs) -> "CspClassifier":
        classes = epochs.classes
        if classes.size < 2:
            raise DegenerateLabels("need at least two classes")
        self.classes_ = classes
        nfilter = min(self.nfilter, epochs.n_channels)
        means = class_mean_covariances(epochs, self.estimator)
        if classes.size == 2:
            self.banks_ = [
                self._fit_bank(means[int(classes[0])], means[int(classes[1])], nfilter)
            ]
            self.heads_ = [self.head_factory()]
            self.heads_[0].fit(csp_logvar(self.banks_[0], epochs), epochs.labels)
        else:
            counts = {int(c): int(np.sum(epochs.labels == c)) for c in classes}
            total = sum(counts.values())
            self.banks_, self.heads_ = [], []
            for c in classes:
                rest = [
                    means[o] * counts[o] / (total - counts[int(c)])
                    for o in counts
                    if o != int(c)
                ]
                bank = self._fit_bank(means[int(c)], np.sum(rest, axis=0), nfilter)
                head = self.head_factory()
                head.fit(csp_logvar(bank, epochs), (epochs.labels == c).astype(int))
                self.banks_.append(bank)
                self.heads_.append(head)
        return self

    def predict_proba(self, epochs: Epochs) -> np.ndarray:
        if self.classes_.size == 2:
            return self.heads_[0].predict_proba(csp_logvar(self.banks_[0], epochs))
        scores = np.column_stack(
            [
                head.predict_proba(csp_logvar(bank, epochs))[:, 1]
                for bank, head in zip(self.banks_, self.heads_)
            ]
        )
        total = scores.sum(axis=1, keepdims=True)
        uniform = np.full_like(scores, 1.0 / scores.shape[1])
        return np.where(total > 0, scores / np.where(total > 0, total, 1.0), uniform)

    def predict(self, epochs: Epochs) -> np.ndarray:
        return self.classes_[np.argmax(self.predict_proba(epochs), axis=1)]


class FbcspClassifier:
    """Filter-bank CSP features + head, one-vs-rest beyond two classes."""

    def __init__(self, head_factory, bands, nfilter_per_band: int = 4,
                 k_features: int = 8):
        self.head_factory = head_factory
        self.bands = bands
        self.nfilter_per_band = nfilter_per_band
        self.k_features = k_features

    def _fit_binary(self, epochs: Epochs):
        fb = FilterBankCsp(self.bands, self.nfilter_per_band, self.k_features)
        fb.fit(epochs)
        head = self.head_factory()
        head.fit(fb.transform(epochs), epochs.labels)
        return fb, head

    def fit(self, epochs: Epochs) -> "FbcspClassifier":
        classes = epochs.classes
        if classes.size < 2:
            raise DegenerateLabels("need at least two classes")
        self.classes_ = classes
        if classes.size == 2:
            self.parts_ = [self._fit_binary(epochs)]
        else:
            self.parts_ = []
            for c in classes:
                binarized = Epochs(
                    epochs.data,
                    (epochs.labels == c).astype(int),
                    epochs.sfreq,
                    epochs.tmin,
                )
                self.parts_.append(self._fit_binary(binarized))
        return self

    def predict_proba(self, epochs: Epochs) -> np.ndarray:
        if self.classes_.size == 2:
            fb, head = self.parts_[0]
            return head.predict_proba(fb.transform(epochs))
        scores = np.column_stack(
            [head.predict_proba(fb.transform(epochs))[:, 1] for fb, head in self.parts_]
        )
        total = scores.sum(axis=1, keepdims=True)
        uniform = np.full_like(scores, 1.0 / scores.shape[1])
        return np.where(total > 0, scores / np.where(total > 0, total, 1.0), uniform)

    def predict(self, epochs: Epochs) -> np.ndarray:
        return self.classes_[np.argmax(self.predict_proba(epochs), axis=1)]


def make_logvar_classifier(head) -> FeatureClassifier:
    return FeatureClassifier(logvar_features, head)
