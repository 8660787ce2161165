"""Deterministic synthetic recordings for the three supported paradigms.

Each generator builds the minimal signal structure its pipeline family
relies on: class-specific spatial covariance for motor imagery, an
additive time-locked transient for event-related potentials, and line
spectra for steady-state responses.  Background activity is 1/f-shaped
noise in all cases.  Given the same spec (including its seed) the output
is bitwise identical, and each subject's data depends only on its own
derived seed, not on how many subjects are generated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datasets import Dataset
from .dsp import Recording, design_butter_bandpass, epoch, filtfilt
from .errors import InvalidBand, InvalidInput
from .evaluation import derive_seed

MI_SOURCE_BAND = (10.0, 14.0)
ERP_PEAK_S = 0.3
ERP_WIDTH_S = 0.08
ERP_NONTARGET_FACTOR = 5
GAP_S = 1.0


@dataclass(frozen=True)
class SynthSpec:
    """Size, rate, and separability parameters of a generated dataset.

    ``snr`` is the power ratio of the class-informative signal to the
    unit-variance background on the mixed channels; 0 removes the signal
    entirely.  ``subject_shift`` scales a per-subject perturbation of the
    spatial patterns, creating cross-subject variability.
    """

    paradigm: str
    n_subjects: int = 2
    n_sessions: int = 2
    n_channels: int = 8
    n_trials_per_class: int = 20
    n_classes: int = 2
    sfreq: float = 128.0
    trial_len_s: float = 4.0
    snr: float = 1.0
    subject_shift: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.paradigm not in ("mi", "erp", "ssvep"):
            raise InvalidInput(f"unknown paradigm {self.paradigm!r}")
        for name in ("n_subjects", "n_sessions", "n_channels", "n_trials_per_class", "n_classes"):
            if getattr(self, name) < 1:
                raise InvalidInput(f"{name} must be at least 1")
        if self.sfreq <= 0 or self.trial_len_s <= 0:
            raise InvalidInput("sfreq and trial_len_s must be positive")
        if self.snr < 0:
            raise InvalidInput("snr must be nonnegative")
        if self.subject_shift < 0:
            raise InvalidInput("subject_shift must be nonnegative")

    @property
    def trial_samples(self) -> int:
        return int(round(self.trial_len_s * self.sfreq))


def _pink_noise(rng: np.random.Generator, n_channels: int, n_samples: int) -> np.ndarray:
    """Unit-variance noise with a 1/f power spectrum (amplitude f^-1/2)."""
    white = rng.standard_normal((n_channels, n_samples))
    spectrum = np.fft.rfft(white, axis=1)
    freqs = np.fft.rfftfreq(n_samples)
    scale = np.zeros_like(freqs)
    scale[1:] = 1.0 / np.sqrt(freqs[1:])
    shaped = np.fft.irfft(spectrum * scale, n=n_samples, axis=1)
    return shaped / shaped.std(axis=1, keepdims=True)


def noise_band_fraction(n_samples: int, sfreq: float, low_hz: float, high_hz: float) -> float:
    """Share of the 1/f background's power falling in [low_hz, high_hz].

    Computed on the discrete spectrum the noise is actually shaped with, so
    snr calibrations against it are exact in expectation.
    """
    freqs = np.fft.rfftfreq(n_samples, d=1.0 / sfreq)
    power = np.zeros_like(freqs)
    power[1:] = 1.0 / freqs[1:]
    band = power[(freqs >= low_hz) & (freqs <= high_hz)].sum()
    return float(band / power.sum())


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _subject_patterns(spec: SynthSpec, subject: int, n_patterns: int) -> np.ndarray:
    """Per-subject unit spatial patterns: shared base plus a scaled shift."""
    base_rng = np.random.default_rng(derive_seed(spec.seed, spec.paradigm, "base-patterns"))
    base = base_rng.standard_normal((n_patterns, spec.n_channels))
    shift_rng = np.random.default_rng(derive_seed(spec.seed, spec.paradigm, "shift", subject))
    shift = shift_rng.standard_normal((n_patterns, spec.n_channels))
    mixed = base + spec.subject_shift * shift
    return np.stack([_unit(row) for row in mixed])


def _trial_layout(spec: SynthSpec, labels: np.ndarray) -> tuple[int, np.ndarray]:
    gap = int(round(GAP_S * spec.sfreq))
    step = spec.trial_samples + gap
    onsets = gap + step * np.arange(labels.size)
    total = int(onsets[-1] + spec.trial_samples + gap)
    return total, onsets


def _session_labels(spec: SynthSpec, counts: list[int], rng: np.random.Generator) -> np.ndarray:
    labels = np.repeat(np.arange(len(counts)), counts)
    rng.shuffle(labels)
    return labels


def gen_mi(spec: SynthSpec) -> dict:
    """Motor-imagery recordings: class-specific mixing of a 10-14 Hz source.

    During each trial a narrowband source is mixed into the channels
    through that class's spatial pattern; between trials only the 1/f
    background remains.  ``snr`` is the source power over the background
    power inside the source's own band, a ratio any band-preserving filter
    downstream leaves intact.  Returns {subject: {session: Recording}}.
    """
    if spec.paradigm != "mi":
        raise InvalidInput("spec paradigm must be 'mi'")
    cascade = design_butter_bandpass(*MI_SOURCE_BAND, spec.sfreq)
    class_names = tuple(f"class{c}" for c in range(spec.n_classes))
    out: dict = {}
    for s in range(spec.n_subjects):
        subject = f"{s + 1:02d}"
        mixing = _subject_patterns(spec, s, spec.n_classes)
        sessions = {}
        for k in range(spec.n_sessions):
            rng = np.random.default_rng(derive_seed(spec.seed, "mi", subject, k))
            labels = _session_labels(spec, [spec.n_trials_per_class] * spec.n_classes, rng)
            total, onsets = _trial_layout(spec, labels)
            amplitude = math.sqrt(
                spec.snr * noise_band_fraction(total, spec.sfreq, *MI_SOURCE_BAND)
            )
            data = _pink_noise(rng, spec.n_channels, total)
            if amplitude > 0:
                for onset, label in zip(onsets, labels):
                    source = filtfilt(cascade, rng.standard_normal(spec.trial_samples))
                    source /= source.std()
                    data[:, onset : onset + spec.trial_samples] += amplitude * np.outer(
                        mixing[label], source
                    )
            sessions[f"{k:02d}"] = Recording(
                data, spec.sfreq, tuple(zip(onsets, labels)), class_names
            )
        out[subject] = sessions
    return out


def gen_erp(spec: SynthSpec) -> dict:
    """Event-related recordings: targets carry a 300 ms Gaussian deflection.

    Binary only, with non-targets outnumbering targets 5:1
    (``n_trials_per_class`` counts the targets).  The deflection rides on a
    per-subject spatial pattern; ``snr`` is its squared peak amplitude over
    the unit background variance.  Non-target trials are background only.
    """
    if spec.paradigm != "erp":
        raise InvalidInput("spec paradigm must be 'erp'")
    if spec.n_classes != 2:
        raise InvalidInput("erp generation is binary: n_classes must be 2")
    class_names = ("nontarget", "target")
    t = np.arange(spec.trial_samples) / spec.sfreq
    bump = np.exp(-0.5 * ((t - ERP_PEAK_S) / ERP_WIDTH_S) ** 2)
    amplitude = math.sqrt(spec.snr)
    out: dict = {}
    for s in range(spec.n_subjects):
        subject = f"{s + 1:02d}"
        pattern = _subject_patterns(spec, s, 1)[0]
        template = amplitude * np.outer(pattern, bump)
        sessions = {}
        for k in range(spec.n_sessions):
            rng = np.random.default_rng(derive_seed(spec.seed, "erp", subject, k))
            counts = [ERP_NONTARGET_FACTOR * spec.n_trials_per_class, spec.n_trials_per_class]
            labels = _session_labels(spec, counts, rng)
            total, onsets = _trial_layout(spec, labels)
            data = _pink_noise(rng, spec.n_channels, total)
            for onset, label in zip(onsets, labels):
                if label == 1:
                    data[:, onset : onset + spec.trial_samples] += template
            sessions[f"{k:02d}"] = Recording(
                data, spec.sfreq, tuple(zip(onsets, labels)), class_names
            )
        out[subject] = sessions
    return out


def default_ssvep_freqs(n_classes: int) -> tuple:
    return tuple(13.0 + 4.0 * i for i in range(n_classes))


def gen_ssvep(spec: SynthSpec, freqs=None) -> dict:
    """Steady-state recordings: each class flickers at its own frequency.

    Class-f trials carry sinusoids at f and 2f whose amplitudes follow a
    1/f law (the harmonic at half the fundamental's amplitude), mixed
    through a per-subject pattern.  Phases are stimulus-locked: fixed per
    subject, session, and class, so same-class trials align in phase.
    """
    if spec.paradigm != "ssvep":
        raise InvalidInput("spec paradigm must be 'ssvep'")
    freqs = tuple(float(f) for f in (freqs or default_ssvep_freqs(spec.n_classes)))
    if len(freqs) != spec.n_classes:
        raise InvalidInput(f"need {spec.n_classes} frequencies, got {len(freqs)}")
    nyquist = spec.sfreq / 2.0
    for f in freqs:
        if not 0 < f <= nyquist / 2.0:
            raise InvalidBand(
                f"stimulation frequency {f} Hz leaves no harmonic room below "
                f"the Nyquist rate {nyquist} Hz"
            )
    class_names = tuple(str(f) for f in freqs)
    t = np.arange(spec.trial_samples) / spec.sfreq
    out: dict = {}
    for s in range(spec.n_subjects):
        subject = f"{s + 1:02d}"
        pattern = _subject_patterns(spec, s, 1)[0]
        sessions = {}
        for k in range(spec.n_sessions):
            rng = np.random.default_rng(derive_seed(spec.seed, "ssvep", subject, k))
            phases = rng.uniform(0, 2 * np.pi, size=(spec.n_classes, 2))
            labels = _session_labels(spec, [spec.n_trials_per_class] * spec.n_classes, rng)
            total, onsets = _trial_layout(spec, labels)
            data = _pink_noise(rng, spec.n_channels, total)
            if spec.snr > 0:
                # per class: unit fundamental plus half-amplitude harmonic
                # (1/f law) carries mean power 0.625; scale it so the power
                # ratio to the background inside the two stimulation bands
                # (each 1 Hz wide) equals snr
                waves = []
                for c, f in enumerate(freqs):
                    in_band = noise_band_fraction(
                        total, spec.sfreq, f - 0.5, f + 0.5
                    ) + noise_band_fraction(total, spec.sfreq, 2 * f - 0.5, 2 * f + 0.5)
                    amplitude = math.sqrt(spec.snr * in_band / 0.625)
                    waves.append(
                        amplitude
                        * (
                            np.sin(2 * np.pi * f * t + phases[c, 0])
                            + 0.5 * np.sin(2 * np.pi * 2 * f * t + phases[c, 1])
                        )
                    )
                for onset, label in zip(onsets, labels):
                    data[:, onset : onset + spec.trial_samples] += np.outer(
                        pattern, waves[label]
                    )
            sessions[f"{k:02d}"] = Recording(
                data, spec.sfreq, tuple(zip(onsets, labels)), class_names
            )
        out[subject] = sessions
    return out


_GENERATORS = {"mi": gen_mi, "erp": gen_erp, "ssvep": gen_ssvep}


def gen_recordings(spec: SynthSpec, freqs=None) -> dict:
    """Paradigm-dispatched generation of {subject: {session: Recording}}."""
    if spec.paradigm == "ssvep":
        return gen_ssvep(spec, freqs)
    return _GENERATORS[spec.paradigm](spec)


def synth_dataset(spec: SynthSpec, freqs=None, dataset_id: str | None = None) -> Dataset:
    """Generate and epoch a full dataset ready for evaluation.

    Trials span [0, trial_len_s) relative to each onset; no filtering is
    applied here, leaving band selection to the preprocessing stage.
    """
    recordings = gen_recordings(spec, freqs)
    sessions = {
        subject: {
            session: epoch(rec, 0.0, spec.trial_len_s)
            for session, rec in by_session.items()
        }
        for subject, by_session in recordings.items()
    }
    return Dataset(dataset_id or f"synth-{spec.paradigm}", spec.paradigm, sessions)
