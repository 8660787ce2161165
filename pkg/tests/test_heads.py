"""Classifier heads: LDA, elastic-net logistic regression, linear margin."""

import numpy as np
import pytest

from eegbench.errors import InvalidHyper, SingularCovariance
from eegbench.pipelines.heads import (
    LdaHead,
    LinearMarginHead,
    LogRegHead,
    sigmoid,
    softmax,
)


def gaussian_blobs(seed, n=60, sep=3.0, n_features=4, classes=(0, 1)):
    rng = np.random.default_rng(seed)
    xs, ys = [], []
    for i, c in enumerate(classes):
        center = np.zeros(n_features)
        center[i % n_features] = sep * (i + 1)
        xs.append(rng.standard_normal((n, n_features)) + center)
        ys.append(np.full(n, c))
    return np.concatenate(xs), np.concatenate(ys)


class TestLinkFunctions:
    def test_sigmoid_bounds_and_midpoint(self):
        z = np.array([-800.0, 0.0, 800.0])
        p = sigmoid(z)
        assert np.all((p >= 0) & (p <= 1))
        assert p[1] == pytest.approx(0.5)

    def test_softmax_rows_normalize(self):
        scores = np.array([[1.0, 2.0, 3.0], [1000.0, 1000.0, 0.0]])
        p = softmax(scores)
        assert np.allclose(p.sum(axis=1), 1.0)
        assert np.all(p >= 0)


class TestLdaHead:
    def test_binary_separation(self):
        x, y = gaussian_blobs(0)
        head = LdaHead().fit(x, y)
        assert (head.predict(x) == y).mean() > 0.95
        proba = head.predict_proba(x)
        assert proba.shape == (x.shape[0], 2)
        assert np.allclose(proba.sum(axis=1), 1.0)

    def test_known_direction(self):
        # identity within-class covariance: w is parallel to the mean gap
        rng = np.random.default_rng(1)
        gap = np.array([2.0, 0.0, 0.0])
        x0 = rng.standard_normal((4000, 3))
        x1 = rng.standard_normal((4000, 3)) + gap
        head = LdaHead().fit(np.vstack([x0, x1]), np.r_[np.zeros(4000), np.ones(4000)])
        w = head.coef_ / np.linalg.norm(head.coef_)
        assert abs(w @ np.array([1.0, 0.0, 0.0])) > 0.99

    def test_singular_covariance_raises(self):
        x, y = gaussian_blobs(2, n_features=2)
        x = np.column_stack([x, x[:, 0]])  # duplicated feature
        with pytest.raises(SingularCovariance):
            LdaHead().fit(x, y)

    def test_shrinkage_handles_singularity(self):
        x, y = gaussian_blobs(3, n_features=2)
        x = np.column_stack([x, x[:, 0]])
        head = LdaHead(shrinkage="lw").fit(x, y)
        assert (head.predict(x) == y).mean() > 0.9

    def test_unknown_shrinkage(self):
        with pytest.raises(InvalidHyper):
            LdaHead(shrinkage="auto")

    def test_multiclass_one_vs_rest(self):
        x, y = gaussian_blobs(4, classes=(3, 5, 7), sep=4.0)
        head = LdaHead().fit(x, y)
        assert set(head.classes_) == {3, 5, 7}
        assert (head.predict(x) == y).mean() > 0.9
        assert np.allclose(head.predict_proba(x).sum(axis=1), 1.0)


class TestLogRegHead:
    def test_binary_separation(self):
        x, y = gaussian_blobs(5)
        head = LogRegHead().fit(x, y)
        assert (head.predict(x) == y).mean() > 0.95

    def test_stronger_penalty_shrinks_weights(self):
        x, y = gaussian_blobs(6)
        loose = LogRegHead(strength=0.001).fit(x, y)
        tight = LogRegHead(strength=10.0).fit(x, y)
        assert np.linalg.norm(tight.coef_) < np.linalg.norm(loose.coef_)

    def test_l1_produces_exact_zeros(self):
        rng = np.random.default_rng(7)
        x = rng.standard_normal((200, 6))
        # only the first feature matters; lasso should null out the rest
        y = (x[:, 0] > 0).astype(int)
        head = LogRegHead(strength=0.3, l1_ratio=1.0).fit(x, y)
        assert np.count_nonzero(np.abs(head.coef_) < 1e-12) >= 4
        assert abs(head.coef_[0]) > 0

    def test_hyper_validation(self):
        with pytest.raises(InvalidHyper):
            LogRegHead(strength=-1.0)
        with pytest.raises(InvalidHyper):
            LogRegHead(l1_ratio=1.5)

    def test_multiclass(self):
        x, y = gaussian_blobs(8, classes=(0, 1, 2), sep=4.0)
        head = LogRegHead().fit(x, y)
        assert (head.predict(x) == y).mean() > 0.9


class TestLinearMarginHead:
    def test_binary_separation(self):
        x, y = gaussian_blobs(9)
        head = LinearMarginHead(c=1.0, seed=0).fit(x, y)
        assert (head.predict(x) == y).mean() > 0.95
        proba = head.predict_proba(x)
        assert np.all((proba >= 0) & (proba <= 1))

    def test_seed_determinism(self):
        x, y = gaussian_blobs(10)
        w1 = LinearMarginHead(c=1.0, seed=3).fit(x, y).coef_
        w2 = LinearMarginHead(c=1.0, seed=3).fit(x, y).coef_
        assert np.array_equal(w1, w2)

    def test_small_c_regularizes(self):
        x, y = gaussian_blobs(11)
        small = LinearMarginHead(c=1e-4, seed=0).fit(x, y)
        large = LinearMarginHead(c=100.0, seed=0).fit(x, y)
        assert np.linalg.norm(small._w) < np.linalg.norm(large._w)

    def test_invalid_c(self):
        with pytest.raises(InvalidHyper):
            LinearMarginHead(c=0.0)

    def test_multiclass(self):
        x, y = gaussian_blobs(12, classes=(0, 1, 2), sep=4.0)
        head = LinearMarginHead(c=1.0, seed=0).fit(x, y)
        assert (head.predict(x) == y).mean() > 0.9
