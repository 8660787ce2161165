"""Event-related potential pipelines: XDAWN filtering and super-trial
covariances that embed the evoked response alongside the single trial."""

from __future__ import annotations

import numpy as np

from ..dsp import Epochs, covariance, _centered, _ledoit_wolf
from ..errors import DegenerateLabels, InvalidHyper
from ..spd import SpdMatrix, sym_eig, _sqrtm_invsqrtm
from .csp import SpatialFilterBank
from .heads import LdaHead


def target_class(epochs: Epochs) -> int:
    """The label treated as the evoked (target) condition.

    A class literally named "target" wins; otherwise the minority class,
    which under the usual 1:5 oddball ratio is the evoked one.  Ties break
    toward the larger label value.
    """
    if epochs.class_names:
        for label, name in enumerate(epochs.class_names):
            if str(name).lower() == "target" and label in epochs.labels:
                return label
    classes, counts = np.unique(epochs.labels, return_counts=True)
    order = sorted(zip(counts, -classes))
    return int(-order[0][1])


def evoked_template(epochs: Epochs, label: int) -> np.ndarray:
    """Mean of the trials carrying ``label``: (n_channels, n_samples)."""
    mask = epochs.labels == label
    if not mask.any():
        raise DegenerateLabels(f"no trials with label {label}")
    return epochs.data[mask].mean(axis=0)


def xdawn_fit(train: Epochs, nfilter: int = 4) -> SpatialFilterBank:
    """Spatial filters maximizing evoked energy against signal energy.

    Solves ``Sigma_template v = lambda Sigma_signal v`` where the template
    covariance comes from the averaged target response and the signal
    covariance from the full training signal (all trials concatenated).
    The returned filters are orthonormal under the signal covariance
    metric.
    """
    if nfilter < 1 or nfilter > train.n_channels:
        raise InvalidHyper(
            f"nfilter must lie in [1, {train.n_channels}], got {nfilter}"
        )
    if np.unique(train.labels).size < 2:
        raise DegenerateLabels("XDAWN needs target and non-target trials")
    template = evoked_template(train, target_class(train))
    sigma_t = covariance(template, "shrunk").values
    continuous = np.concatenate(list(train.data), axis=1)
    sigma_s = covariance(continuous, "shrunk").values
    _, isq = _sqrtm_invsqrtm(sigma_s)
    evals, evecs = sym_eig(isq @ sigma_t @ isq)
    filters = (isq @ evecs[:, :nfilter]).T
    return SpatialFilterBank(filters, np.linalg.pinv(filters), evals[:nfilter])


class XdawnLdaClassifier:
    """XDAWN-filtered trials flattened to vectors, classified by shrunk LDA.

    The flattened dimension (nfilter * n_samples) usually exceeds the trial
    count, so the discriminant uses Ledoit-Wolf shrinkage.
    """

    def __init__(self, nfilter: int = 4):
        self.nfilter = nfilter

    def fit(self, epochs: Epochs) -> "XdawnLdaClassifier":
        self.bank_ = xdawn_fit(epochs, min(self.nfilter, epochs.n_channels))
        self.head_ = LdaHead(shrinkage="lw")
        self.head_.fit(self._features(epochs), epochs.labels)
        self.classes_ = self.head_.classes_
        return self

    def _features(self, epochs: Epochs) -> np.ndarray:
        projected = np.einsum("fc,tcs->tfs", self.bank_.filters, epochs.data)
        return projected.reshape(epochs.n_trials, -1)

    def predict_proba(self, epochs: Epochs) -> np.ndarray:
        return self.head_.predict_proba(self._features(epochs))

    def predict(self, epochs: Epochs) -> np.ndarray:
        return self.classes_[np.argmax(self.predict_proba(epochs), axis=1)]


def erp_super_trial(trial: np.ndarray, prototype: np.ndarray) -> np.ndarray:
    """Stack the evoked prototype above the trial: ((n_p + n), n_samples)."""
    if trial.shape[1] != prototype.shape[1]:
        raise InvalidHyper("prototype and trial lengths differ")
    return np.concatenate([prototype, trial], axis=0)


def erp_cov(trial: np.ndarray, prototype: np.ndarray) -> SpdMatrix:
    """Shrunk covariance of the prototype/trial super-trial.

    The off-diagonal blocks carry the correlation between the single trial
    and the evoked response, which is what separates targets from
    non-targets.
    """
    return covariance(erp_super_trial(trial, prototype), "shrunk")


class ErpSuperTrialCov:
    """Covariance transform built on the learned evoked prototype.

    With ``svd_n`` set, the prototype is compressed to its leading left
    singular components, bounding the super-trial dimension at
    ``svd_n + n_channels``.
    """

    def __init__(self, svd_n: int | None = None):
        if svd_n is not None and svd_n < 1:
            raise InvalidHyper("svd_n must be positive")
        self.svd_n = svd_n

    def fit(self, epochs: Epochs) -> "ErpSuperTrialCov":
        proto = evoked_template(epochs, target_class(epochs))
        if self.svd_n is not None:
            k = min(self.svd_n, proto.shape[0])
            u, _, _ = np.linalg.svd(_centered(proto), full_matrices=False)
            proto = u[:, :k].T @ proto
        self.prototype_ = proto
        return self

    def transform(self, epochs: Epochs) -> np.ndarray:
        return np.stack(
            [erp_cov(t, self.prototype_).values for t in epochs.data]
        )


class XdawnSuperTrialCov:
    """Super-trial covariance in XDAWN component space.

    Both the evoked prototype and each trial are spatially filtered before
    stacking, giving compact (2 * nfilter) sized covariances.
    """

    def __init__(self, nfilter: int = 4):
        self.nfilter = nfilter

    def fit(self, epochs: Epochs) -> "XdawnSuperTrialCov":
        self.bank_ = xdawn_fit(epochs, min(self.nfilter, epochs.n_channels))
        template = evoked_template(epochs, target_class(epochs))
        self.prototype_ = self.bank_.filters @ template
        return self

    def transform(self, epochs: Epochs) -> np.ndarray:
        covs = []
        for trial in epochs.data:
            filtered = self.bank_.filters @ trial
            covs.append(erp_cov(filtered, self.prototype_).values)
        return np.stack(covs)
