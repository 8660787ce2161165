"""Classifiers operating on covariance matrices as manifold points."""

from __future__ import annotations

import numpy as np

from ..dsp import Epochs, augmented_covariance, covariance, _ledoit_wolf
from ..errors import DegenerateLabels
from ..spd import (
    airm_distance,
    batch_tangent_vectorize,
    frechet_mean,
    tangent_unvectorize,
)


class PlainCov:
    """Per-trial spatial covariance, shrunk by default."""

    def __init__(self, estimator: str = "shrunk"):
        self.estimator = estimator

    def fit(self, epochs: Epochs) -> "PlainCov":
        return self

    def transform(self, epochs: Epochs) -> np.ndarray:
        return np.stack(
            [covariance(t, self.estimator).values for t in epochs.data]
        )


class AugmentedCov:
    """Covariance of the delay-embedded trial (captures temporal structure)."""

    def __init__(self, order: int = 2, lag: int = 2):
        self.order = order
        self.lag = lag

    def fit(self, epochs: Epochs) -> "AugmentedCov":
        return self

    def transform(self, epochs: Epochs) -> np.ndarray:
        return np.stack(
            [augmented_covariance(t, self.order, self.lag).values for t in epochs.data]
        )


def class_frechet_means(covs: np.ndarray, labels: np.ndarray) -> dict[int, np.ndarray]:
    classes = np.unique(labels)
    if classes.size < 2:
        raise DegenerateLabels("need at least two classes")
    return {int(c): frechet_mean(covs[labels == c]).values for c in classes}


class MdmClassifier:
    """Minimum distance to mean on the SPD manifold.

    Each class is summarized by the Frechet mean of its training
    covariances; a trial is assigned to the nearest mean under the
    affine-invariant distance, with probabilities from a softmax over
    negated distances.
    """

    def __init__(self, cov_transform=None):
        self.cov_transform = cov_transform if cov_transform is not None else PlainCov()

    def fit(self, epochs: Epochs) -> "MdmClassifier":
        self.cov_transform.fit(epochs)
        covs = self.cov_transform.transform(epochs)
        means = class_frechet_means(covs, epochs.labels)
        self.classes_ = np.array(sorted(means))
        self.means_ = [means[int(c)] for c in self.classes_]
        return self

    def distances(self, epochs: Epochs) -> np.ndarray:
        covs = self.cov_transform.transform(epochs)
        return np.array(
            [[airm_distance(c, m) for m in self.means_] for c in covs]
        )

    def predict_proba(self, epochs: Epochs) -> np.ndarray:
        from .heads import softmax

        return softmax(-self.distances(epochs))

    def predict(self, epochs: Epochs) -> np.ndarray:
        return self.classes_[np.argmin(self.distances(epochs), axis=1)]


class FgMdmClassifier:
    """MDM after geodesic filtering.

    Training covariances are mapped to the tangent space at their grand
    Frechet mean, projected onto the discriminant subspace of a linear
    discriminant fit (rank = n_classes - 1), mapped back to the manifold,
    and classified with MDM.  Test trials pass through the same learned
    projection.
    """

    def __init__(self, cov_transform=None):
        self.cov_transform = cov_transform if cov_transform is not None else PlainCov()

    def fit(self, epochs: Epochs) -> "FgMdmClassifier":
        self.cov_transform.fit(epochs)
        covs = self.cov_transform.transform(epochs)
        labels = epochs.labels
        classes = np.unique(labels)
        if classes.size < 2:
            raise DegenerateLabels("need at least two classes")
        self.reference_ = frechet_mean(covs).values
        vecs = batch_tangent_vectorize(self.reference_, covs)
        self.projection_ = _discriminant_projection(vecs, labels)
        filtered = self._rebuild(vecs @ self.projection_.T)
        self._mdm = MdmClassifier(_PrecomputedCov())
        means = class_frechet_means(filtered, labels)
        self._mdm.classes_ = np.array(sorted(means))
        self._mdm.means_ = [means[int(c)] for c in self._mdm.classes_]
        self.classes_ = self._mdm.classes_
        return self

    def filter_tangent(self, vecs: np.ndarray) -> np.ndarray:
        """Apply the learned discriminant projection to tangent vectors."""
        return vecs @ self.projection_.T

    def _rebuild(self, vecs: np.ndarray) -> np.ndarray:
        return np.stack(
            [tangent_unvectorize(self.reference_, v).values for v in vecs]
        )

    def _filtered_covs(self, epochs: Epochs) -> np.ndarray:
        covs = self.cov_transform.transform(epochs)
        vecs = batch_tangent_vectorize(self.reference_, covs)
        return self._rebuild(self.filter_tangent(vecs))

    def distances(self, epochs: Epochs) -> np.ndarray:
        filtered = self._filtered_covs(epochs)
        return np.array(
            [[airm_distance(c, m) for m in self._mdm.means_] for c in filtered]
        )

    def predict_proba(self, epochs: Epochs) -> np.ndarray:
        from .heads import softmax

        return softmax(-self.distances(epochs))

    def predict(self, epochs: Epochs) -> np.ndarray:
        return self.classes_[np.argmin(self.distances(epochs), axis=1)]


class _PrecomputedCov:
    """Placeholder transform for classifiers fed covariances directly."""

    def fit(self, epochs):
        return self

    def transform(self, epochs):
        raise NotImplementedError("internal classifier; covariances are precomputed")


def _discriminant_projection(vecs: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the LDA discriminant subspace.

    Directions are ``Sw^{-1} (mu_c - mu)`` per class with a Ledoit-Wolf
    shrunk within-class covariance; the projector onto their span has rank
    n_classes - 1 and is idempotent by construction.
    """
    classes = np.unique(labels)
    mu = vecs.mean(axis=0)
    centered = np.empty_like(vecs)
    rows = []
    for c in classes:
        mask = labels == c
        mu_c = vecs[mask].mean(axis=0)
        centered[mask] = vecs[mask] - mu_c
        rows.append(mu_c - mu)
    sw = _ledoit_wolf(centered.T)
    directions = np.linalg.solve(sw, np.array(rows).T).T  # (n_classes, dim)
    return directions.T @ np.linalg.pinv(directions @ directions.T) @ directions


class TangentSpaceClassifier:
    """Project covariances to the tangent space at their Frechet mean and
    classify the resulting vectors with a linear head."""

    def __init__(self, head, cov_transform=None):
        self.head = head
        self.cov_transform = cov_transform if cov_transform is not None else PlainCov()

    def fit(self, epochs: Epochs) -> "TangentSpaceClassifier":
        self.cov_transform.fit(epochs)
        covs = self.cov_transform.transform(epochs)
        self.reference_ = frechet_mean(covs).values
        x = batch_tangent_vectorize(self.reference_, covs)
        self.head.fit(x, epochs.labels)
        self.classes_ = self.head.classes_
        return self

    def _features(self, epochs: Epochs) -> np.ndarray:
        covs = self.cov_transform.transform(epochs)
        return batch_tangent_vectorize(self.reference_, covs)

    def predict_proba(self, epochs: Epochs) -> np.ndarray:
        return self.head.predict_proba(self._features(epochs))

    def predict(self, epochs: Epochs) -> np.ndarray:
        return self.classes_[np.argmax(self.predict_proba(epochs), axis=1)]
