"""Spatial filtering by common spatial patterns and its variants.

All filter banks are expressed as a :class:`SpatialFilterBank`: ``filters``
rows project channel data onto components, ``patterns`` columns describe the
scalp activity each component captures, ``eigenvalues`` carry the
discriminability ordering used for selection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dsp import Epochs, covariance, design_butter_bandpass, filtfilt
from ..errors import DegenerateLabels, InvalidHyper
from ..spd import sym_eig, _sqrtm_invsqrtm


@dataclass(frozen=True)
class SpatialFilterBank:
    filters: np.ndarray  # (n_filters, n_channels)
    patterns: np.ndarray  # (n_channels, n_filters)
    eigenvalues: np.ndarray  # (n_filters,)


def logvar_features(epochs: Epochs) -> np.ndarray:
    """Log of the per-channel variance of each trial."""
    var = epochs.data.var(axis=2, ddof=1)
    return np.log(np.maximum(var, 1e-300))


def class_mean_covariances(epochs: Epochs, estimator: str = "scm") -> dict[int, np.ndarray]:
    """Arithmetic mean of per-trial covariances, one entry per class."""
    out = {}
    for c in epochs.classes:
        trials = epochs.data[epochs.labels == c]
        covs = [covariance(t, estimator).values for t in trials]
        out[int(c)] = np.mean(covs, axis=0)
    return out


def _alternating_order(n: int) -> np.ndarray:
    """Index order [0, n-1, 1, n-2, ...]: largest, smallest, second largest, ..."""
    order = np.empty(n, dtype=int)
    order[0::2] = np.arange((n + 1) // 2)
    order[1::2] = np.arange(n - 1, n - 1 - n // 2, -1)
    return order


def csp_fit(cov_a: np.ndarray, cov_b: np.ndarray, nfilter: int) -> SpatialFilterBank:
    """Common spatial patterns for a two-condition problem.

    Solves ``S_d v = lambda S_c v`` with ``S_d = cov_a - cov_b`` and
    ``S_c = cov_a + cov_b`` by whitening with ``S_c^{-1/2}``; eigenvalues
    lie in [-1, 1].  The ``nfilter`` returned filters alternate between the
    most positive and most negative eigenvalues, so both conditions get
    their most discriminative components.
    """
    cov_a = np.asarray(cov_a, dtype=float)
    cov_b = np.asarray(cov_b, dtype=float)
    n = cov_a.shape[0]
    if not 1 <= nfilter <= n:
        raise InvalidHyper(f"nfilter must lie in [1, {n}], got {nfilter}")
    s_d = cov_a - cov_b
    s_c = cov_a + cov_b
    _, isq = _sqrtm_invsqrtm(s_c)
    evals, evecs = sym_eig(isq @ s_d @ isq)
    order = _alternating_order(n)[:nfilter]
    filters = (isq @ evecs[:, order]).T
    patterns = np.linalg.pinv(filters)
    return SpatialFilterBank(filters, patterns, evals[order])


def trcsp_fit(
    cov_a: np.ndarray, cov_b: np.ndarray, nfilter: int, alpha: float
) -> SpatialFilterBank:
    """Tikhonov-regularized CSP.

    One generalized eigenproblem per class direction, with the common
    denominator regularized as ``S_c + alpha * tr(S_c)/n * I``; the top
    ``nfilter`` filters are pooled alternately from the two problems.
    At ``alpha = 0`` the filters coincide with :func:`csp_fit` up to sign.
    """
    if alpha < 0:
        raise InvalidHyper("alpha must be nonnegative")
    cov_a = np.asarray(cov_a, dtype=float)
    cov_b = np.asarray(cov_b, dtype=float)
    n = cov_a.shape[0]
    if not 1 <= nfilter <= n:
        raise InvalidHyper(f"nfilter must lie in [1, {n}], got {nfilter}")
    s_c = cov_a + cov_b
    denom = s_c + alpha * (np.trace(s_c) / n) * np.eye(n)
    _, isq = _sqrtm_invsqrtm(denom)
    banks = []
    for numer in (cov_a, cov_b):
        evals, evecs = sym_eig(isq @ numer @ isq)
        banks.append(((isq @ evecs).T, evals))
    filters, eigenvalues = [], []
    take = [(nfilter + 1) // 2, nfilter // 2]
    for (f, e), k in zip(banks, take):
        filters.append(f[:k])
        eigenvalues.append(e[:k])
    # interleave: best of class a, best of class b, second best of a, ...
    out_f = np.empty((nfilter, n))
    out_e = np.empty(nfilter)
    out_f[0::2], out_f[1::2] = filters[0], filters[1]
    out_e[0::2], out_e[1::2] = eigenvalues[0], eigenvalues[1]
    return SpatialFilterBank(out_f, np.linalg.pinv(out_f), out_e)


def apply_filters(bank: SpatialFilterBank, epochs: Epochs) -> np.ndarray:
    """Project trials onto the filter components: (n_trials, n_filters, n_samples)."""
    return np.einsum("fc,tcs->tfs", bank.filters, epochs.data)


def csp_logvar(bank: SpatialFilterBank, epochs: Epochs) -> np.ndarray:
    projected = apply_filters(bank, epochs)
    return np.log(np.maximum(projected.var(axis=2, ddof=1), 1e-300))


def mutual_information(feature: np.ndarray, labels: np.ndarray, n_bins: int = 8) -> float:
    """Mutual information between one feature and the labels, in nats.

    Histogram estimator: the feature is discretized into ``n_bins`` equal
    width bins over its observed range.
    """
    feature = np.asarray(feature, dtype=float)
    labels = np.asarray(labels)
    classes = np.unique(labels)
    lo, hi = feature.min(), feature.max()
    if hi <= lo:
        return 0.0
    edges = np.linspace(lo, hi, n_bins + 1)
    total = feature.size
    mi = 0.0
    for c in classes:
        counts, _ = np.histogram(feature[labels == c], bins=edges)
        p_joint = counts / total
        p_c = counts.sum() / total
        p_bin, _ = np.histogram(feature, bins=edges)
        p_bin = p_bin / total
        mask = p_joint > 0
        mi += float(np.sum(p_joint[mask] * np.log(p_joint[mask] / (p_c * p_bin[mask]))))
    return mi


class FilterBankCsp:
    """Per-band CSP features with mutual-information selection.

    Each band of the filter bank is bandpass-filtered (zero phase), given
    its own CSP, and contributes ``nfilter_per_band`` log-variance
    features; the ``k_features`` most label-informative ones (8-bin
    histogram mutual information) survive.
    """

    def __init__(self, bands, nfilter_per_band: int = 4, k_features: int = 8):
        self.bands = tuple(tuple(b) for b in bands)
        if not self.bands:
            raise InvalidHyper("filter bank needs at least one band")
        self.nfilter_per_band = nfilter_per_band
        self.k_features = k_features

    def fit(self, epochs: Epochs) -> "FilterBankCsp":
        classes = epochs.classes
        if classes.size != 2:
            raise DegenerateLabels("filter-bank CSP is a two-condition method")
        total = len(self.bands) * self.nfilter_per_band
        if self.k_features > total:
            raise InvalidHyper(
                f"k_features={self.k_features} exceeds the {total} features available"
            )
        self._cascades = [
            design_butter_bandpass(lo, hi, epochs.sfreq) for lo, hi in self.bands
        ]
        self._banks = []
        features = []
        for cascade in self._cascades:
            filtered = Epochs(
                filtfilt(cascade, epochs.data),
                epochs.labels,
                epochs.sfreq,
                epochs.tmin,
                epochs.class_names,
            )
            means = class_mean_covariances(filtered, "scm")
            bank = csp_fit(
                means[int(classes[0])], means[int(classes[1])], self.nfilter_per_band
            )
            self._banks.append(bank)
            features.append(csp_logvar(bank, filtered))
        x = np.hstack(features)
        scores = np.array(
            [mutual_information(x[:, j], epochs.labels) for j in range(x.shape[1])]
        )
        # stable selection: score descending, feature index breaks ties
        self.selected_ = np.lexsort((np.arange(scores.size), -scores))[: self.k_features]
        self.selected_ = np.sort(self.selected_)
        return self

    def transform(self, epochs: Epochs) -> np.ndarray:
        features = []
        for cascade, bank in zip(self._cascades, self._banks):
            filtered = Epochs(
                filtfilt(cascade, epochs.data),
                epochs.labels,
                epochs.sfreq,
                epochs.tmin,
                epochs.class_names,
            )
            features.append(csp_logvar(bank, filtered))
        return np.hstack(features)[:, self.selected_]


def default_filter_bank(low: float, high: float, width: float = 4.0) -> tuple:
    """Contiguous bands of the given width tiling [low, high]."""
    edges = np.arange(low, high + 1e-9, width)
    return tuple((float(a), float(b)) for a, b in zip(edges[:-1], edges[1:]))
