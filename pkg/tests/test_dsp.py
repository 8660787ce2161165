"""Signal layer: containers, filter design, epoching, resampling, covariance."""

import numpy as np
import pytest

from eegbench.dsp import (
    BiquadCascade,
    Epochs,
    Recording,
    augmented_covariance,
    concat_epochs,
    covariance,
    delay_embed,
    design_butter_bandpass,
    epoch,
    filtfilt,
    frequency_response,
    resample,
    resample_array,
)
from eegbench.errors import (
    DimensionMismatch,
    EmptyEpochs,
    InvalidBand,
    InvalidEmbedding,
    InvalidInput,
    SignalTooShort,
    UnsupportedRatio,
)


def sine(freq, sfreq, n, phase=0.0):
    return np.sin(2 * np.pi * freq * np.arange(n) / sfreq + phase)


class TestContainers:
    def test_recording_properties(self):
        rec = Recording(np.zeros((3, 100)), 50.0, ((10, 0), (40, 1)))
        assert (rec.n_channels, rec.n_samples) == (3, 100)
        assert rec.events == ((10, 0), (40, 1))

    def test_recording_rejects_bad_data(self):
        with pytest.raises(InvalidInput):
            Recording(np.zeros(10), 50.0)
        with pytest.raises(InvalidInput):
            Recording(np.full((2, 10), np.nan), 50.0)
        with pytest.raises(InvalidInput):
            Recording(np.zeros((2, 10)), 0.0)

    def test_epochs_properties(self):
        ep = Epochs(np.zeros((4, 3, 20)), [0, 1, 0, 1], 10.0, class_names=("a", "b"))
        assert (ep.n_trials, ep.n_channels, ep.n_samples) == (4, 3, 20)
        assert np.array_equal(ep.classes, [0, 1])

    def test_epochs_select_preserves_metadata(self):
        ep = Epochs(np.arange(24).reshape(4, 3, 2), [0, 1, 0, 1], 10.0,
                    tmin=-0.5, class_names=("a", "b"))
        sub = ep.select([2, 0])
        assert np.array_equal(sub.labels, [0, 0])
        assert np.array_equal(sub.data[0], ep.data[2])
        assert sub.tmin == -0.5 and sub.class_names == ("a", "b")

    def test_epochs_rejects_mismatched_labels(self):
        with pytest.raises(InvalidInput):
            Epochs(np.zeros((4, 3, 20)), [0, 1], 10.0)

    def test_concat_epochs(self):
        a = Epochs(np.ones((2, 3, 5)), [0, 1], 10.0)
        b = Epochs(np.zeros((3, 3, 5)), [1, 0, 1], 10.0)
        merged = concat_epochs([a, b])
        assert merged.n_trials == 5
        assert np.array_equal(merged.labels, [0, 1, 1, 0, 1])

    def test_concat_epochs_rejects_mismatch(self):
        a = Epochs(np.ones((2, 3, 5)), [0, 1], 10.0)
        b = Epochs(np.ones((2, 3, 5)), [0, 1], 20.0)
        with pytest.raises(DimensionMismatch):
            concat_epochs([a, b])
        with pytest.raises(InvalidInput):
            concat_epochs([])


class TestFilterDesign:
    def test_band_edges_at_3db(self):
        cascade = design_butter_bandpass(8.0, 32.0, 128.0)
        mag = frequency_response(cascade, np.array([8.0, 32.0]))
        db = 20 * np.log10(np.abs(mag))
        assert np.allclose(db, -3.0103, atol=0.05)

    def test_passband_center_flat(self):
        cascade = design_butter_bandpass(8.0, 32.0, 128.0)
        mag = np.abs(frequency_response(cascade, np.array([16.0])))
        assert mag[0] == pytest.approx(1.0, abs=0.01)

    def test_dc_and_nyquist_rejected(self):
        cascade = design_butter_bandpass(8.0, 32.0, 128.0)
        mag = np.abs(frequency_response(cascade, np.array([0.0, 64.0])))
        assert np.all(mag < 1e-6)

    def test_invalid_bands(self):
        with pytest.raises(InvalidBand):
            design_butter_bandpass(0.0, 32.0, 128.0)
        with pytest.raises(InvalidBand):
            design_butter_bandpass(32.0, 8.0, 128.0)
        with pytest.raises(InvalidBand):
            design_butter_bandpass(8.0, 64.0, 128.0)

    def test_cascade_rejects_unstable_sections(self):
        # poles on/outside the unit circle: a = [1, -2, 1] has a double pole at z=1
        sections = np.array([[1.0, 0.0, 0.0, 1.0, -2.0, 1.0]])
        with pytest.raises(InvalidInput):
            BiquadCascade(sections, 128.0, 8.0, 32.0, 1)

    def test_cascade_rejects_bad_shape(self):
        with pytest.raises(InvalidInput):
            BiquadCascade(np.ones((1, 5)), 128.0, 8.0, 32.0, 1)


class TestFiltfilt:
    def test_zero_phase_on_inband_sinusoid(self):
        sfreq, n = 128.0, 1024
        x = sine(16.0, sfreq, n)
        y = filtfilt(design_butter_bandpass(8.0, 32.0, sfreq), x)
        # discard edge transients, then check peak correlation sits at lag 0
        xc, yc = x[128:-128], y[128:-128]
        corr = np.correlate(yc, xc, mode="full")
        assert int(np.argmax(corr)) - (xc.size - 1) == 0
        assert yc.std() == pytest.approx(xc.std(), rel=0.02)

    def test_out_of_band_attenuated(self):
        sfreq, n = 128.0, 1024
        x = sine(2.0, sfreq, n)
        y = filtfilt(design_butter_bandpass(8.0, 32.0, sfreq), x)
        assert y[128:-128].std() < 0.02 * x.std()

    def test_multichannel_shape(self):
        x = np.random.default_rng(0).standard_normal((3, 4, 256))
        y = filtfilt(design_butter_bandpass(8.0, 32.0, 128.0), x)
        assert y.shape == x.shape

    def test_short_signal_rejected(self):
        cascade = design_butter_bandpass(8.0, 32.0, 128.0)
        with pytest.raises(SignalTooShort):
            filtfilt(cascade, np.zeros(10))


class TestEpoch:
    def make_recording(self):
        data = np.arange(200, dtype=float).reshape(2, 100)
        events = ((10, 0), (50, 1), (95, 0))
        return Recording(data, 10.0, events, ("a", "b"))

    def test_window_content_and_labels(self):
        ep = epoch(self.make_recording(), 0.0, 2.0)
        # 2 s at 10 Hz: samples [onset, onset + 20); the 95-onset trial is dropped
        assert ep.n_trials == 2 and ep.n_samples == 20
        assert np.array_equal(ep.labels, [0, 1])
        assert np.array_equal(ep.data[0, 0], np.arange(10, 30, dtype=float))
        assert ep.tmin == 0.0 and ep.class_names == ("a", "b")

    def test_negative_tmin(self):
        ep = epoch(self.make_recording(), -0.5, 0.5)
        assert ep.n_samples == 10
        assert np.array_equal(ep.data[0, 0], np.arange(5, 15, dtype=float))

    def test_all_windows_out_of_bounds(self):
        rec = Recording(np.zeros((1, 30)), 10.0, ((25, 0),))
        with pytest.raises(EmptyEpochs):
            epoch(rec, 0.0, 2.0)

    def test_no_events(self):
        rec = Recording(np.zeros((1, 30)), 10.0)
        with pytest.raises(EmptyEpochs):
            epoch(rec, 0.0, 1.0)

    def test_bad_window(self):
        with pytest.raises(InvalidInput):
            epoch(self.make_recording(), 1.0, 1.0)


class TestResample:
    def test_length_and_tone_preserved(self):
        sfreq = 128.0
        x = sine(10.0, sfreq, 512)
        y = resample_array(x, sfreq, 64.0)
        assert y.shape == (256,)
        spec = np.abs(np.fft.rfft(y[32:-32]))
        freqs = np.fft.rfftfreq(y[32:-32].size, d=1 / 64.0)
        assert abs(freqs[np.argmax(spec)] - 10.0) < 0.5

    def test_identity_rate_copies(self):
        x = np.ones((2, 10))
        y = resample_array(x, 128.0, 128.0)
        assert np.array_equal(x, y) and y is not x

    def test_upsampling_length(self):
        y = resample_array(np.zeros(100), 128.0, 160.0)
        assert y.shape == (125,)

    def test_unsupported_ratio(self):
        with pytest.raises(UnsupportedRatio):
            resample_array(np.zeros(100), 128.0, 128.0 * np.pi)

    def test_recording_events_rescaled(self):
        rec = Recording(np.zeros((1, 100)), 100.0, ((40, 1), (80, 0)))
        out = resample(rec, 50.0)
        assert out.sfreq == 50.0
        assert out.events == ((20, 1), (40, 0))


class TestCovariance:
    def test_scm_matches_definition(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((3, 50))
        centered = x - x.mean(axis=1, keepdims=True)
        expected = centered @ centered.T / 49
        assert np.allclose(covariance(x, "scm").values, expected, atol=1e-12)

    def test_shrunk_is_spd_when_scm_singular(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((10, 6))  # fewer samples than channels
        c = covariance(x, "shrunk")
        assert np.linalg.eigvalsh(c.values).min() > 0

    def test_shrunk_moves_toward_scaled_identity(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal((4, 200))
        scm = covariance(x, "scm").values
        shrunk = covariance(x, "shrunk").values
        # same trace direction, strictly smaller eigenvalue spread
        spread = lambda m: np.ptp(np.linalg.eigvalsh(m))
        assert spread(shrunk) < spread(scm)

    def test_unknown_estimator(self):
        with pytest.raises(InvalidInput):
            covariance(np.ones((2, 10)), "oas")


class TestDelayEmbedding:
    def test_shape_and_content(self):
        x = np.arange(20, dtype=float).reshape(2, 10)
        emb = delay_embed(x, order=3, lag=2)
        # block k holds the signal delayed by k * lag samples
        assert emb.shape == (6, 6)
        assert np.array_equal(emb[0], x[0, 4:10])
        assert np.array_equal(emb[2], x[0, 2:8])
        assert np.array_equal(emb[4], x[0, 0:6])

    def test_order_one_is_identity(self):
        x = np.arange(10, dtype=float).reshape(1, 10)
        assert np.array_equal(delay_embed(x, 1, 3), x)

    def test_invalid_embedding(self):
        x = np.zeros((2, 10))
        with pytest.raises(InvalidEmbedding):
            delay_embed(x, order=6, lag=2)
        with pytest.raises(InvalidEmbedding):
            delay_embed(x, order=0, lag=1)

    def test_augmented_covariance_order_one_equals_shrunk(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal((4, 100))
        assert np.allclose(
            augmented_covariance(x, 1, 1).values,
            covariance(x, "shrunk").values,
            atol=1e-12,
        )

    def test_augmented_covariance_dimension(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal((4, 100))
        assert augmented_covariance(x, 3, 2).values.shape == (12, 12)
