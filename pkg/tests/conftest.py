"""Shared fixtures: random SPD factories and small synthetic datasets.

The paradigm datasets are session-scoped because generation plus bandpass
filtering dominates test time; every test treats them as read-only.
"""

import numpy as np
import pytest

from eegbench.datasets import preprocess
from eegbench.evaluation import stratified_kfold
from eegbench.pipelines import PARADIGM_BANDS
from eegbench.synth import SynthSpec, synth_dataset


def random_spd(rng, n, spread=1.5):
    """Random SPD matrix with log-eigenvalues uniform in [-spread, spread]."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    w = np.exp(rng.uniform(-spread, spread, size=n))
    a = (q * w) @ q.T
    return (a + a.T) / 2.0


def random_sym(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    return (a + a.T) / 2.0


def first_split(epochs, k=4, seed=0):
    """(train, test) epochs from the first stratified fold."""
    train_idx, test_idx = stratified_kfold(epochs.labels, k, seed)[0]
    return epochs.select(train_idx), epochs.select(test_idx)


def single_session(dataset):
    subject = dataset.subject_ids[0]
    return dataset.epochs(subject, dataset.session_ids(subject)[0])


@pytest.fixture(scope="session")
def mi_dataset():
    spec = SynthSpec("mi", n_subjects=2, n_sessions=2, n_channels=8,
                     n_trials_per_class=30, snr=5.0, seed=3)
    return preprocess(synth_dataset(spec), band=PARADIGM_BANDS["mi"])


@pytest.fixture(scope="session")
def mi_session(mi_dataset):
    return single_session(mi_dataset)


@pytest.fixture(scope="session")
def erp_dataset():
    spec = SynthSpec("erp", n_subjects=2, n_sessions=1, n_channels=8,
                     n_trials_per_class=20, trial_len_s=1.0, snr=5.0, seed=4)
    return preprocess(synth_dataset(spec), band=PARADIGM_BANDS["erp"])


@pytest.fixture(scope="session")
def erp_session(erp_dataset):
    return single_session(erp_dataset)


@pytest.fixture(scope="session")
def ssvep_dataset():
    spec = SynthSpec("ssvep", n_subjects=2, n_sessions=1, n_channels=8,
                     n_classes=3, n_trials_per_class=12, sfreq=256.0,
                     trial_len_s=2.0, snr=5.0, seed=5)
    return preprocess(synth_dataset(spec), band=PARADIGM_BANDS["ssvep"])


@pytest.fixture(scope="session")
def ssvep_session(ssvep_dataset):
    return single_session(ssvep_dataset)
