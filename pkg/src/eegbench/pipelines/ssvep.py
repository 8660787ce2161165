"""Steady-state visual evoked potential pipelines.

Class labels index frequency names (e.g. "12.0"); every classifier here
parses the stimulation frequencies out of ``Epochs.class_names``.
"""

from __future__ import annotations

import numpy as np

from ..dsp import Epochs, covariance, design_butter_bandpass, filtfilt
from ..errors import DegenerateLabels, InvalidBand, InvalidHyper, InvalidInput
from ..spd import SpdMatrix
from .heads import softmax


def class_frequencies(epochs: Epochs) -> dict[int, float]:
    """Map each label to its stimulation frequency parsed from class names."""
    if not epochs.class_names:
        raise InvalidInput("epochs carry no class names to parse frequencies from")
    freqs = {}
    for label in np.unique(epochs.labels):
        try:
            freqs[int(label)] = float(epochs.class_names[label])
        except (ValueError, IndexError) as exc:
            raise InvalidInput(
                f"class name for label {label} is not a frequency"
            ) from exc
    return freqs


def cca_references(
    freq: float, n_harmonics: int, sfreq: float, n_samples: int
) -> np.ndarray:
    """Sine/cosine reference bank at a frequency and its harmonics.

    Shape (2 * n_harmonics, n_samples); raises :class:`InvalidBand` when a
    harmonic reaches the Nyquist frequency.
    """
    if n_harmonics < 1:
        raise InvalidHyper("need at least one harmonic")
    if freq * n_harmonics >= sfreq / 2.0:
        raise InvalidBand(
            f"harmonic {n_harmonics} of {freq} Hz reaches Nyquist ({sfreq / 2} Hz)"
        )
    t = np.arange(n_samples) / sfreq
    rows = []
    for k in range(1, n_harmonics + 1):
        rows.append(np.sin(2 * np.pi * k * freq * t))
        rows.append(np.cos(2 * np.pi * k * freq * t))
    return np.array(rows)


def _clip_invsqrt(c: np.ndarray) -> np.ndarray:
    """Inverse square root with small-eigenvalue clipping (pseudo-whitening)."""
    w, v = np.linalg.eigh((c + c.T) / 2.0)
    floor = 1e-12 * max(w[-1], 0.0)
    inv = np.where(w > floor, 1.0 / np.sqrt(np.maximum(w, floor)), 0.0)
    return (v * inv) @ v.T


def canonical_correlation(x: np.ndarray, y: np.ndarray) -> float:
    """First canonical correlation between two multichannel signals.

    Whitens both blocks (eigenvalue clipping handles rank deficiency) and
    takes the largest singular value of the whitened cross-covariance; the
    result lies in [0, 1].
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[1] != y.shape[1]:
        raise InvalidInput("signals must share the sample axis")
    xc = x - x.mean(axis=1, keepdims=True)
    yc = y - y.mean(axis=1, keepdims=True)
    t = x.shape[1]
    cxx = xc @ xc.T / t
    cyy = yc @ yc.T / t
    cxy = xc @ yc.T / t
    m = _clip_invsqrt(cxx) @ cxy @ _clip_invsqrt(cyy)
    rho = np.linalg.svd(m, compute_uv=False)[0]
    return float(np.clip(rho, 0.0, 1.0))


class CcaClassifier:
    """Frequency recognition by canonical correlation with reference banks.

    Scores each candidate frequency by the first canonical correlation
    between the trial and sin/cos references at the frequency and its
    harmonics; the argmax wins and a softmax over correlations provides
    probabilities.  Needs no training statistics beyond the label/frequency
    mapping.
    """

    def __init__(self, n_harmonics: int = 3):
        self.n_harmonics = n_harmonics

    def fit(self, epochs: Epochs) -> "CcaClassifier":
        freqs = class_frequencies(epochs)
        self.classes_ = np.array(sorted(freqs))
        self.freqs_ = [freqs[int(c)] for c in self.classes_]
        self.sfreq_ = epochs.sfreq
        for f in self.freqs_:
            cca_references(f, self.n_harmonics, self.sfreq_, 2)
        return self

    def correlations(self, epochs: Epochs) -> np.ndarray:
        refs = [
            cca_references(f, self.n_harmonics, self.sfreq_, epochs.n_samples)
            for f in self.freqs_
        ]
        return np.array(
            [[canonical_correlation(trial, r) for r in refs] for trial in epochs.data]
        )

    def predict_proba(self, epochs: Epochs) -> np.ndarray:
        return softmax(self.correlations(epochs))

    def predict(self, epochs: Epochs) -> np.ndarray:
        return self.classes_[np.argmax(self.correlations(epochs), axis=1)]


class TrcaClassifier:
    """Task-related component analysis with per-class templates.

    For each class, finds the spatial filter maximizing reproducibility
    across trials (cross-trial covariance against the covariance of the
    concatenated signal) and keeps the filtered class-mean trial as a
    template.  Test trials are scored by Pearson correlation between their
    filtered time course and each template.
    """

    def fit(self, epochs: Epochs) -> "TrcaClassifier":
        classes = np.unique(epochs.labels)
        if classes.size < 2:
            raise DegenerateLabels("need at least two classes")
        self.classes_ = classes
        self.filters_ = []
        self.templates_ = []
        for c in classes:
            trials = epochs.data[epochs.labels == c]
            if trials.shape[0] < 2:
                raise DegenerateLabels(
                    f"class {c} has fewer than 2 trials; TRCA needs repetitions"
                )
            centered = trials - trials.mean(axis=2, keepdims=True)
            z = centered.sum(axis=0)
            s = z @ z.T - np.einsum("tcs,tds->cd", centered, centered)
            q = np.concatenate(list(centered), axis=1)
            q = q @ q.T
            isq = _clip_invsqrt(q)
            m = isq @ ((s + s.T) / 2.0) @ isq
            w_, v = np.linalg.eigh((m + m.T) / 2.0)
            w = isq @ v[:, -1]
            self.filters_.append(w)
            self.templates_.append(w @ trials.mean(axis=0))
        return self

    def correlations(self, epochs: Epochs) -> np.ndarray:
        out = np.empty((epochs.n_trials, self.classes_.size))
        for j, (w, template) in enumerate(zip(self.filters_, self.templates_)):
            tc = template - template.mean()
            tn = np.linalg.norm(tc)
            for i, trial in enumerate(epochs.data):
                x = w @ trial
                xc = x - x.mean()
                denom = np.linalg.norm(xc) * tn
                out[i, j] = float(xc @ tc / denom) if denom > 0 else 0.0
        return out

    def predict_proba(self, epochs: Epochs) -> np.ndarray:
        return softmax(self.correlations(epochs))

    def predict(self, epochs: Epochs) -> np.ndarray:
        return self.classes_[np.argmax(self.correlations(epochs), axis=1)]


def ssvep_extended_cov(
    trial: np.ndarray,
    cascades,
) -> SpdMatrix:
    """Shrunk covariance of the trial filtered at each stimulation band.

    The per-band filtered copies are stacked vertically, so the dimension
    is ``n_channels * n_freqs`` and cross-band blocks expose which band
    dominates.
    """
    stacked = np.concatenate([filtfilt(c, trial) for c in cascades], axis=0)
    return covariance(stacked, "shrunk")


class SsvepBandCov:
    """Covariance transform stacking narrowband-filtered copies per frequency."""

    def __init__(self, halfwidth: float = 0.5):
        if halfwidth <= 0:
            raise InvalidHyper("halfwidth must be positive")
        self.halfwidth = halfwidth

    def fit(self, epochs: Epochs) -> "SsvepBandCov":
        freqs = class_frequencies(epochs)
        ordered = sorted(freqs)
        self._cascades = [
            design_butter_bandpass(
                freqs[c] - self.halfwidth, freqs[c] + self.halfwidth, epochs.sfreq
            )
            for c in ordered
        ]
        return self

    def transform(self, epochs: Epochs) -> np.ndarray:
        return np.stack(
            [ssvep_extended_cov(t, self._cascades).values for t in epochs.data]
        )
