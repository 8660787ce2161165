"""Signal conditioning: IIR bandpass filtering, epoching, resampling,
and covariance estimation.

The containers here (:class:`Recording`, :class:`Epochs`) are what the
synthetic generators produce and what every pipeline consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np
from scipy import signal as sps

from .errors import (
    DimensionMismatch,
    EmptyEpochs,
    InvalidBand,
    InvalidEmbedding,
    InvalidInput,
    SignalTooShort,
    UnsupportedRatio,
)
from .spd import SpdMatrix


@dataclass(frozen=True)
class Recording:
    """A continuous multichannel signal with event markers.

    ``data`` has shape (n_channels, n_samples); ``events`` is a sequence of
    ``(sample_index, label)`` pairs marking trial onsets.
    """

    data: np.ndarray
    sfreq: float
    events: tuple = field(default_factory=tuple)
    class_names: tuple = ()

    def __post_init__(self):
        a = np.asarray(self.data, dtype=float)
        if a.ndim != 2:
            raise InvalidInput(f"recording data must be 2-D, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInput("recording contains non-finite samples")
        if self.sfreq <= 0:
            raise InvalidInput("sampling rate must be positive")
        object.__setattr__(self, "data", a)
        object.__setattr__(self, "events", tuple((int(s), int(l)) for s, l in self.events))

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class Epochs:
    """Event-locked trials: shape (n_trials, n_channels, n_samples).

    ``labels[i]`` is the integer class of trial ``i``; ``tmin`` is the time
    of the first sample relative to the event onset.  ``class_names`` maps
    label values to human-readable names when known.
    """

    data: np.ndarray
    labels: np.ndarray
    sfreq: float
    tmin: float = 0.0
    class_names: tuple = ()

    def __post_init__(self):
        a = np.asarray(self.data, dtype=float)
        y = np.asarray(self.labels, dtype=int)
        if a.ndim != 3:
            raise InvalidInput(f"epochs data must be 3-D, got shape {a.shape}")
        if y.ndim != 1 or y.shape[0] != a.shape[0]:
            raise InvalidInput("labels length must equal the number of trials")
        if not np.all(np.isfinite(a)):
            raise InvalidInput("epochs contain non-finite samples")
        if self.sfreq <= 0:
            raise InvalidInput("sampling rate must be positive")
        object.__setattr__(self, "data", a)
        object.__setattr__(self, "labels", y)

    @property
    def n_trials(self) -> int:
        return self.data.shape[0]

    @property
    def n_channels(self) -> int:
        return self.data.shape[1]

    @property
    def n_samples(self) -> int:
        return self.data.shape[2]

    @property
    def classes(self) -> np.ndarray:
        return np.unique(self.labels)

    def select(self, idx) -> "Epochs":
        """Subset of trials, preserving metadata."""
        idx = np.asarray(idx)
        return replace(self, data=self.data[idx], labels=self.labels[idx])


def concat_epochs(parts) -> Epochs:
    """Concatenate trial sets recorded with identical layout."""
    parts = list(parts)
    if not parts:
        raise InvalidInput("nothing to concatenate")
    first = parts[0]
    for p in parts[1:]:
        if p.n_channels != first.n_channels or p.n_samples != first.n_samples:
            raise DimensionMismatch("epoch shapes differ across parts")
        if p.sfreq != first.sfreq:
            raise DimensionMismatch("sampling rates differ across parts")
    return replace(
        first,
        data=np.concatenate([p.data for p in parts]),
        labels=np.concatenate([p.labels for p in parts]),
    )


@dataclass(frozen=True)
class BiquadCascade:
    """A digital IIR filter factored into second-order sections.

    ``sections`` is an (n_sections, 6) array of [b0 b1 b2 1 a1 a2] rows.
    Construction verifies every section is stable (poles strictly inside
    the unit circle).
    """

    sections: np.ndarray
    sfreq: float
    low_hz: float
    high_hz: float
    order: int

    def __post_init__(self):
        sos = np.asarray(self.sections, dtype=float)
        if sos.ndim != 2 or sos.shape[1] != 6:
            raise InvalidInput("sections must be an (n, 6) array")
        for row in sos:
            poles = np.roots(row[3:])
            if poles.size and np.abs(poles).max() >= 1.0:
                raise InvalidInput("unstable biquad section")
        object.__setattr__(self, "sections", sos)

    @property
    def n_sections(self) -> int:
        return self.sections.shape[0]


def design_butter_bandpass(
    low_hz: float, high_hz: float, sfreq: float, order: int = 4
) -> BiquadCascade:
    """Design a Butterworth bandpass filter as a stable biquad cascade.

    The analog prototype of the given order is bandpass-transformed with
    prewarped edges and discretized bilinearly, so the digital magnitude is
    exactly -3 dB at ``low_hz`` and ``high_hz``.  The result has
    ``order`` second-order sections (2 * order poles).
    """
    nyq = sfreq / 2.0
    if not (0.0 < low_hz < high_hz < nyq):
        raise InvalidBand(
            f"band ({low_hz}, {high_hz}) Hz invalid for sampling rate {sfreq} Hz"
        )
    if order < 1:
        raise InvalidInput("filter order must be at least 1")
    sos = sps.butter(order, [low_hz, high_hz], btype="bandpass", fs=sfreq, output="sos")
    return BiquadCascade(sos, sfreq, low_hz, high_hz, order)


def frequency_response(cascade: BiquadCascade, freqs_hz) -> np.ndarray:
    """Complex transfer function of the cascade on the unit circle."""
    freqs = np.atleast_1d(np.asarray(freqs_hz, dtype=float))
    _, h = sps.sosfreqz(cascade.sections, worN=freqs, fs=cascade.sfreq)
    return h


def filtfilt(cascade: BiquadCascade, x: np.ndarray) -> np.ndarray:
    """Zero-phase filtering along the last axis.

    Forward pass, reversal, backward pass, reversal; the signal is extended
    at both ends by odd reflection of length 3 * (2 * n_sections + 1), and
    each pass starts from step-response-matched initial conditions.  The
    squared magnitude response this implies has zero phase at every
    frequency.
    """
    x = np.asarray(x, dtype=float)
    padlen = 3 * (2 * cascade.n_sections + 1)
    if x.shape[-1] <= padlen:
        raise SignalTooShort(
            f"need more than {padlen} samples for zero-phase filtering, "
            f"got {x.shape[-1]}"
        )
    return sps.sosfiltfilt(cascade.sections, x, axis=-1, padtype="odd", padlen=padlen)


def epoch(recording: Recording, tmin: float, tmax: float) -> Epochs:
    """Slice event-locked windows [tmin, tmax) out of a recording.

    The window covers sample offsets ``round(tmin * sfreq)`` (inclusive) to
    ``round(tmax * sfreq)`` (exclusive) relative to each event onset.
    Events whose window crosses a recording boundary are dropped; if all
    are dropped the result would be empty and :class:`EmptyEpochs` is
    raised instead.
    """
    if tmax <= tmin:
        raise InvalidInput("tmax must exceed tmin")
    if not recording.events:
        raise EmptyEpochs("recording has no events")
    start_off = int(np.round(tmin * recording.sfreq))
    stop_off = int(np.round(tmax * recording.sfreq))
    if stop_off <= start_off:
        raise InvalidInput("window shorter than one sample")
    trials, labels = [], []
    for onset, label in recording.events:
        lo, hi = onset + start_off, onset + stop_off
        if lo < 0 or hi > recording.n_samples:
            continue
        trials.append(recording.data[:, lo:hi])
        labels.append(label)
    if not trials:
        raise EmptyEpochs("every event window crosses a recording boundary")
    return Epochs(
        np.stack(trials),
        np.asarray(labels, dtype=int),
        recording.sfreq,
        tmin=float(tmin),
        class_names=recording.class_names,
    )


_MAX_RESAMPLE_DENOMINATOR = 1000


def _resample_ratio(old: float, new: float) -> Fraction:
    ratio = Fraction(new / old).limit_denominator(_MAX_RESAMPLE_DENOMINATOR)
    if ratio.numerator <= 0 or abs(float(ratio) - new / old) > 1e-9 * (new / old):
        raise UnsupportedRatio(
            f"resampling ratio {new}/{old} has no small rational form"
        )
    return ratio


def resample_array(x: np.ndarray, sfreq: float, new_sfreq: float) -> np.ndarray:
    """Polyphase rational resampling along the last axis.

    Uses a Kaiser-windowed low-pass kernel; output length is
    ``round(n_samples * new_sfreq / sfreq)``.
    """
    if new_sfreq <= 0:
        raise InvalidInput("target sampling rate must be positive")
    x = np.asarray(x, dtype=float)
    if new_sfreq == sfreq:
        return x.copy()
    ratio = _resample_ratio(sfreq, new_sfreq)
    out = sps.resample_poly(
        x, ratio.numerator, ratio.denominator, axis=-1, window=("kaiser", 5.0)
    )
    target = int(round(x.shape[-1] * new_sfreq / sfreq))
    return out[..., :target]


def resample(recording: Recording, new_sfreq: float) -> Recording:
    """Resample a recording, rescaling its event sample indices."""
    data = resample_array(recording.data, recording.sfreq, new_sfreq)
    scale = new_sfreq / recording.sfreq
    events = tuple(
        (int(round(s * scale)), l)
        for s, l in recording.events
        if int(round(s * scale)) < data.shape[-1]
    )
    return Recording(data, new_sfreq, events, recording.class_names)


def _centered(trial: np.ndarray) -> np.ndarray:
    trial = np.asarray(trial, dtype=float)
    if trial.ndim != 2:
        raise InvalidInput(f"trial must be 2-D (channels, samples), got {trial.shape}")
    if trial.shape[1] < 2:
        raise InvalidInput("need at least 2 samples to estimate covariance")
    if not np.all(np.isfinite(trial)):
        raise InvalidInput("trial contains non-finite samples")
    return trial - trial.mean(axis=1, keepdims=True)


def _scm(x: np.ndarray) -> np.ndarray:
    t = x.shape[1]
    c = x @ x.T / (t - 1)
    return (c + c.T) / 2.0


def _ledoit_wolf(x: np.ndarray) -> np.ndarray:
    """Shrink the sample covariance toward a scaled identity.

    The shrinkage weight is the analytic Ledoit-Wolf estimate, clipped to
    [0, 1]; the target preserves the trace.  For any input with spatial
    structure the result is strictly positive definite.
    """
    n, t = x.shape
    s_mle = x @ x.T / t
    mu = np.trace(s_mle) / n
    delta2 = np.sum((s_mle - mu * np.eye(n)) ** 2) / n
    if delta2 <= 0.0:
        gamma = 0.0
    else:
        sq_norms = np.sum((x ** 2), axis=0)
        beta2 = (np.sum(sq_norms ** 2) / t ** 2 - np.sum(s_mle ** 2) / t) / n
        beta2 = min(max(beta2, 0.0), delta2)
        gamma = beta2 / delta2
    scm = _scm(x)
    target = (np.trace(scm) / n) * np.eye(n)
    return (1.0 - gamma) * scm + gamma * target


_ESTIMATORS = {"scm": _scm, "shrunk": _ledoit_wolf}


def covariance(trial: np.ndarray, estimator: str = "scm") -> SpdMatrix:
    """Spatial covariance of one trial after per-channel mean removal.

    ``scm`` is the unbiased sample covariance X X^T / (T - 1); ``shrunk``
    applies Ledoit-Wolf shrinkage toward a scaled identity and survives
    rank-deficient trials (e.g. duplicated channels).  The result must pass
    SPD construction; a degenerate estimate raises rather than being
    silently repaired.
    """
    if estimator not in _ESTIMATORS:
        raise InvalidInput(f"unknown covariance estimator {estimator!r}")
    return SpdMatrix(_ESTIMATORS[estimator](_centered(trial)))


def delay_embed(trial: np.ndarray, order: int, lag: int) -> np.ndarray:
    """Stack a trial with ``order - 1`` lagged copies of itself.

    Row blocks are [X(t); X(t - lag); ...; X(t - (order-1) lag)] over the
    sample range where all copies are defined.
    """
    if order < 1 or lag < 1:
        raise InvalidEmbedding("order and lag must be positive integers")
    x = np.asarray(trial, dtype=float)
    if x.ndim != 2:
        raise InvalidInput(f"trial must be 2-D (channels, samples), got {x.shape}")
    span = (order - 1) * lag
    if x.shape[1] <= span + 1:
        raise InvalidEmbedding(
            f"embedding span {span} leaves fewer than 2 of {x.shape[1]} samples"
        )
    t = x.shape[1]
    blocks = [x[:, span - k * lag : t - k * lag] for k in range(order)]
    return np.concatenate(blocks, axis=0)


def augmented_covariance(trial: np.ndarray, order: int, lag: int) -> SpdMatrix:
    """Shrunk covariance of the delay-embedded trial.

    With ``order == 1`` this reduces exactly to ``covariance(trial,
    "shrunk")``.  The embedded dimension is ``n_channels * order``.
    """
    return covariance(delay_embed(trial, order, lag), "shrunk")
