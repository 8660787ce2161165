"""Synthetic recording generators: determinism, structure, spectral content."""

import numpy as np
import pytest

from eegbench.dsp import design_butter_bandpass, filtfilt
from eegbench.errors import InvalidBand, InvalidInput
from eegbench.synth import (
    SynthSpec,
    default_ssvep_freqs,
    gen_erp,
    gen_mi,
    gen_recordings,
    gen_ssvep,
    noise_band_fraction,
    synth_dataset,
)


class TestSpecValidation:
    def test_rejects_unknown_paradigm(self):
        with pytest.raises(InvalidInput):
            SynthSpec("meg")

    def test_rejects_nonpositive_counts(self):
        with pytest.raises(InvalidInput):
            SynthSpec("mi", n_subjects=0)
        with pytest.raises(InvalidInput):
            SynthSpec("mi", sfreq=0.0)
        with pytest.raises(InvalidInput):
            SynthSpec("mi", snr=-1.0)

    def test_trial_samples(self):
        assert SynthSpec("mi", sfreq=128.0, trial_len_s=4.0).trial_samples == 512

    def test_generator_paradigm_guard(self):
        with pytest.raises(InvalidInput):
            gen_mi(SynthSpec("erp"))
        with pytest.raises(InvalidInput):
            gen_erp(SynthSpec("mi"))
        with pytest.raises(InvalidInput):
            gen_ssvep(SynthSpec("mi"))

    def test_erp_is_binary_only(self):
        with pytest.raises(InvalidInput):
            gen_erp(SynthSpec("erp", n_classes=3))


class TestDeterminism:
    @pytest.mark.parametrize("paradigm", ["mi", "erp", "ssvep"])
    def test_same_spec_same_bits(self, paradigm):
        spec = SynthSpec(paradigm, n_subjects=1, n_sessions=1,
                         n_trials_per_class=3, trial_len_s=1.0)
        a = gen_recordings(spec)["01"]["00"]
        b = gen_recordings(spec)["01"]["00"]
        assert np.array_equal(a.data, b.data)
        assert a.events == b.events

    def test_different_seed_different_data(self):
        base = dict(n_subjects=1, n_sessions=1, n_trials_per_class=3, trial_len_s=1.0)
        a = gen_mi(SynthSpec("mi", seed=0, **base))["01"]["00"]
        b = gen_mi(SynthSpec("mi", seed=1, **base))["01"]["00"]
        assert not np.array_equal(a.data, b.data)

    def test_subject_data_independent_of_subject_count(self):
        small = SynthSpec("mi", n_subjects=1, n_sessions=1, n_trials_per_class=3,
                          trial_len_s=1.0)
        large = SynthSpec("mi", n_subjects=3, n_sessions=1, n_trials_per_class=3,
                          trial_len_s=1.0)
        assert np.array_equal(
            gen_mi(small)["01"]["00"].data, gen_mi(large)["01"]["00"].data
        )


class TestStructure:
    def test_mi_layout(self):
        spec = SynthSpec("mi", n_subjects=2, n_sessions=3, n_channels=5,
                         n_trials_per_class=4, n_classes=3, trial_len_s=1.0)
        recs = gen_mi(spec)
        assert sorted(recs) == ["01", "02"]
        assert sorted(recs["01"]) == ["00", "01", "02"]
        rec = recs["02"]["01"]
        assert rec.n_channels == 5
        labels = [l for _, l in rec.events]
        assert sorted(labels) == [0] * 4 + [1] * 4 + [2] * 4
        assert rec.class_names == ("class0", "class1", "class2")

    def test_erp_oddball_ratio(self):
        spec = SynthSpec("erp", n_subjects=1, n_sessions=1, n_trials_per_class=6,
                         trial_len_s=1.0)
        rec = gen_erp(spec)["01"]["00"]
        labels = np.array([l for _, l in rec.events])
        assert (labels == 1).sum() == 6
        assert (labels == 0).sum() == 30
        assert rec.class_names == ("nontarget", "target")

    def test_ssvep_class_names_are_frequencies(self):
        spec = SynthSpec("ssvep", n_subjects=1, n_sessions=1, n_classes=2,
                         n_trials_per_class=3, trial_len_s=1.0)
        rec = gen_ssvep(spec, freqs=(10.0, 15.0))["01"]["00"]
        assert rec.class_names == ("10.0", "15.0")

    def test_trials_fit_inside_recording(self):
        spec = SynthSpec("mi", n_subjects=1, n_sessions=1, n_trials_per_class=5,
                         trial_len_s=1.0)
        rec = gen_mi(spec)["01"]["00"]
        for onset, _ in rec.events:
            assert 0 <= onset and onset + spec.trial_samples <= rec.n_samples


class TestSignalContent:
    @staticmethod
    def _inband_trial_to_gap_ratio(spec):
        rec = gen_mi(spec)["01"]["00"]
        cascade = design_butter_bandpass(10.0, 14.0, spec.sfreq)
        narrow = filtfilt(cascade, rec.data)
        gap_var = np.var(narrow[:, : int(spec.sfreq)])
        trial_vars = [
            np.var(narrow[:, s : s + spec.trial_samples]) for s, _ in rec.events
        ]
        return float(np.mean(trial_vars) / gap_var)

    def test_mi_trials_carry_source_band_power(self):
        # signal power is snr x in-band background, spread over the channels,
        # so the in-band trial/gap power ratio approaches 1 + snr/n_channels
        spec = SynthSpec("mi", n_subjects=1, n_sessions=1, n_trials_per_class=10,
                         snr=5.0, trial_len_s=2.0, seed=7)
        assert self._inband_trial_to_gap_ratio(spec) > 1.3

    def test_mi_snr_zero_has_no_trial_structure(self):
        spec = SynthSpec("mi", n_subjects=1, n_sessions=1, n_trials_per_class=10,
                         snr=0.0, trial_len_s=2.0, seed=7)
        assert self._inband_trial_to_gap_ratio(spec) == pytest.approx(1.0, abs=0.2)

    def test_erp_target_bump_at_peak_time(self):
        spec = SynthSpec("erp", n_subjects=1, n_sessions=1, n_trials_per_class=20,
                         snr=5.0, trial_len_s=1.0, seed=8)
        ds = synth_dataset(spec)
        ep = ds.epochs("01", "00")
        target_mean = ep.data[ep.labels == 1].mean(axis=0)
        nontarget_mean = ep.data[ep.labels == 0].mean(axis=0)
        peak = int(round(0.3 * spec.sfreq))
        gap = np.abs(target_mean[:, peak]).max() - np.abs(nontarget_mean[:, peak]).max()
        assert gap > 0.5

    def test_ssvep_spectral_line_is_class_specific(self):
        spec = SynthSpec("ssvep", n_subjects=1, n_sessions=1, n_classes=2,
                         n_trials_per_class=8, snr=5.0, trial_len_s=2.0, seed=9)
        ds = synth_dataset(spec, freqs=(10.0, 16.0))
        ep = ds.epochs("01", "00")
        freqs = np.fft.rfftfreq(ep.n_samples, d=1 / spec.sfreq)
        for label, f_stim in ((0, 10.0), (1, 16.0)):
            bin_at = int(np.argmin(np.abs(freqs - f_stim)))
            own = np.abs(
                np.fft.rfft(ep.data[ep.labels == label], axis=2)
            ).mean(axis=(0, 1))[bin_at]
            other = np.abs(
                np.fft.rfft(ep.data[ep.labels != label], axis=2)
            ).mean(axis=(0, 1))[bin_at]
            assert own > 1.3 * other


class TestSsvepFrequencyBounds:
    def test_default_freqs(self):
        assert default_ssvep_freqs(3) == (13.0, 17.0, 21.0)

    def test_frequency_needs_harmonic_room(self):
        spec = SynthSpec("ssvep", n_subjects=1, n_sessions=1, n_classes=1,
                         n_trials_per_class=2, trial_len_s=1.0, sfreq=128.0)
        gen_ssvep(spec, freqs=(32.0,))  # exactly nyquist/2 is allowed
        with pytest.raises(InvalidBand):
            gen_ssvep(spec, freqs=(32.1,))

    def test_frequency_count_must_match_classes(self):
        spec = SynthSpec("ssvep", n_subjects=1, n_sessions=1, n_classes=2,
                         n_trials_per_class=2, trial_len_s=1.0)
        with pytest.raises(InvalidInput):
            gen_ssvep(spec, freqs=(10.0,))


class TestNoiseBandFraction:
    def test_full_band_is_one(self):
        frac = noise_band_fraction(512, 128.0, 0.0, 64.0)
        assert frac == pytest.approx(1.0)

    def test_monotone_in_bandwidth(self):
        narrow = noise_band_fraction(512, 128.0, 10.0, 14.0)
        wide = noise_band_fraction(512, 128.0, 8.0, 32.0)
        assert 0.0 < narrow < wide < 1.0


class TestSynthDataset:
    def test_epoch_counts_and_metadata(self):
        spec = SynthSpec("mi", n_subjects=2, n_sessions=2, n_trials_per_class=4,
                         trial_len_s=1.0)
        ds = synth_dataset(spec, dataset_id="demo")
        assert ds.dataset_id == "demo"
        assert ds.paradigm == "mi"
        ep = ds.epochs("01", "00")
        assert ep.n_trials == 8
        assert ep.n_samples == spec.trial_samples
        assert ep.tmin == 0.0

    def test_default_id_names_paradigm(self):
        spec = SynthSpec("erp", n_subjects=1, n_sessions=1, n_trials_per_class=2,
                         trial_len_s=1.0)
        assert synth_dataset(spec).dataset_id == "synth-erp"
