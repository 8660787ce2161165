"""Covariance transforms and manifold classifiers (MDM, FgMDM, tangent space)."""

import numpy as np
import pytest

from eegbench.dsp import Epochs
from eegbench.pipelines.heads import LogRegHead
from eegbench.pipelines.riemann import (
    AugmentedCov,
    FgMdmClassifier,
    MdmClassifier,
    PlainCov,
    TangentSpaceClassifier,
    class_frechet_means,
)
from conftest import first_split


def covariant_epochs(seed=0, n_per_class=15, n_channels=4, n_samples=128):
    """Two classes whose only difference is channel-power structure."""
    rng = np.random.default_rng(seed)
    scales = {0: np.ones(n_channels), 1: np.ones(n_channels)}
    scales[0][0], scales[1][-1] = 3.0, 3.0
    data, labels = [], []
    for c in (0, 1):
        for _ in range(n_per_class):
            data.append(scales[c][:, None] * rng.standard_normal((n_channels, n_samples)))
            labels.append(c)
    order = rng.permutation(len(labels))
    return Epochs(np.stack(data)[order], np.asarray(labels)[order], 64.0)


class TestCovTransforms:
    def test_plain_cov_stack(self):
        ep = covariant_epochs()
        covs = PlainCov().fit(ep).transform(ep)
        assert covs.shape == (ep.n_trials, 4, 4)
        assert np.all(np.linalg.eigvalsh(covs[0]) > 0)

    def test_plain_cov_scm_estimator(self):
        ep = covariant_epochs()
        covs = PlainCov("scm").fit(ep).transform(ep)
        centered = ep.data[0] - ep.data[0].mean(axis=1, keepdims=True)
        assert np.allclose(covs[0], centered @ centered.T / (ep.n_samples - 1))

    def test_augmented_cov_dimension(self):
        ep = covariant_epochs()
        covs = AugmentedCov(order=3, lag=2).fit(ep).transform(ep)
        assert covs.shape == (ep.n_trials, 12, 12)

    def test_augmented_cov_order_one_reduces_to_plain(self):
        ep = covariant_epochs()
        plain = PlainCov("shrunk").fit(ep).transform(ep)
        aug = AugmentedCov(order=1, lag=1).fit(ep).transform(ep)
        assert np.allclose(plain, aug, atol=1e-12)


class TestClassMeans:
    def test_commuting_matrices(self):
        covs = np.stack([
            np.diag([1.0, 8.0]), np.diag([4.0, 2.0]),
            np.diag([9.0, 1.0]), np.diag([1.0, 1.0]),
        ])
        labels = np.array([0, 0, 1, 1])
        means = class_frechet_means(covs, labels)
        assert np.allclose(means[0], np.diag([2.0, 4.0]), atol=1e-8)
        assert np.allclose(means[1], np.diag([3.0, 1.0]), atol=1e-8)


class TestMdm:
    def test_separates_power_structured_classes(self):
        train = covariant_epochs(seed=1)
        test = covariant_epochs(seed=2)
        model = MdmClassifier().fit(train)
        assert (model.predict(test) == test.labels).mean() > 0.95

    def test_distances_and_proba_shapes(self):
        train = covariant_epochs(seed=3)
        model = MdmClassifier().fit(train)
        d = model.distances(train)
        assert d.shape == (train.n_trials, 2)
        proba = model.predict_proba(train)
        assert np.allclose(proba.sum(axis=1), 1.0)
        assert np.all(proba >= 0)

    def test_classes_attribute(self):
        model = MdmClassifier().fit(covariant_epochs(seed=4))
        assert np.array_equal(model.classes_, [0, 1])

    def test_accepts_custom_transform(self):
        train = covariant_epochs(seed=5)
        model = MdmClassifier(AugmentedCov(order=2, lag=1)).fit(train)
        assert (model.predict(train) == train.labels).mean() > 0.9


class TestFgMdm:
    def test_separates_classes(self):
        train = covariant_epochs(seed=6)
        test = covariant_epochs(seed=7)
        model = FgMdmClassifier().fit(train)
        assert (model.predict(test) == test.labels).mean() > 0.95

    def test_geodesic_filtering_is_a_projection(self):
        train = covariant_epochs(seed=8)
        model = FgMdmClassifier().fit(train)
        rng = np.random.default_rng(9)
        vecs = rng.standard_normal((5, 10))
        once = model.filter_tangent(vecs)
        twice = model.filter_tangent(once)
        assert np.allclose(once, twice, atol=1e-8)


class TestTangentSpace:
    def test_separates_classes(self):
        train = covariant_epochs(seed=10)
        test = covariant_epochs(seed=11)
        model = TangentSpaceClassifier(LogRegHead()).fit(train)
        assert (model.predict(test) == test.labels).mean() > 0.95

    def test_feature_dimension(self):
        train = covariant_epochs(seed=12)
        model = TangentSpaceClassifier(LogRegHead()).fit(train)
        assert model._features(train).shape == (train.n_trials, 10)


class TestOnSynthMi:
    @pytest.mark.parametrize("factory", [
        MdmClassifier,
        FgMdmClassifier,
        lambda: TangentSpaceClassifier(LogRegHead()),
    ])
    def test_high_accuracy_on_mi_session(self, mi_session, factory):
        train, test = first_split(mi_session)
        model = factory().fit(train)
        assert (model.predict(test) == test.labels).mean() > 0.9
