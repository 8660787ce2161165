"""Manifold layer: wrappers, spectral functions, distance, mean, tangent maps."""

import numpy as np
import pytest

from eegbench.errors import InvalidInput, NonConvergence, NotPositiveDefinite
from eegbench.spd import (
    SpdMatrix,
    SymMatrix,
    airm_distance,
    batch_tangent_vectorize,
    exp_map,
    frechet_mean,
    log_map,
    matrix_fn,
    sym_eig,
    tangent_unvectorize,
    tangent_vectorize,
)
from conftest import random_spd, random_sym


class TestWrappers:
    def test_sym_matrix_accepts_and_freezes(self):
        m = SymMatrix([[2.0, 1.0], [1.0, 3.0]])
        assert m.dim == 2
        with pytest.raises(AttributeError):
            m.values = np.eye(2)
        with pytest.raises(ValueError):
            m.values[0, 0] = 5.0

    def test_sym_matrix_symmetrizes_roundoff(self):
        a = np.array([[1.0, 1.0 + 1e-14], [1.0, 2.0]])
        m = SymMatrix(a)
        assert np.array_equal(m.values, m.values.T)

    def test_sym_matrix_rejects_nonsquare(self):
        with pytest.raises(InvalidInput):
            SymMatrix(np.ones((2, 3)))

    def test_sym_matrix_rejects_asymmetric(self):
        with pytest.raises(InvalidInput):
            SymMatrix([[1.0, 0.5], [0.0, 1.0]])

    def test_sym_matrix_rejects_nonfinite(self):
        with pytest.raises(InvalidInput):
            SymMatrix([[np.nan, 0.0], [0.0, 1.0]])

    def test_spd_accepts_positive_definite(self):
        p = SpdMatrix([[2.0, 0.5], [0.5, 1.0]])
        assert p.dim == 2

    def test_spd_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            SpdMatrix([[1.0, 2.0], [2.0, 1.0]])

    def test_spd_rejects_singular(self):
        with pytest.raises(NotPositiveDefinite):
            SpdMatrix([[1.0, 1.0], [1.0, 1.0]])


class TestSymEig:
    def test_descending_and_reconstructs(self):
        rng = np.random.default_rng(0)
        a = random_sym(rng, 5)
        w, v = sym_eig(a)
        assert np.all(np.diff(w) <= 0)
        assert np.allclose((v * w) @ v.T, a, atol=1e-12)
        assert np.allclose(v.T @ v, np.eye(5), atol=1e-12)


class TestMatrixFn:
    def test_exp_log_roundtrip(self):
        rng = np.random.default_rng(1)
        s = random_sym(rng, 4)
        assert np.allclose(matrix_fn(matrix_fn(s, "exp"), "log"), s, atol=1e-10)

    def test_sqrt_squares_back(self):
        rng = np.random.default_rng(2)
        p = random_spd(rng, 4)
        r = matrix_fn(p, "sqrt")
        assert np.allclose(r @ r, p, atol=1e-10)

    def test_invsqrt_inverts_sqrt(self):
        rng = np.random.default_rng(3)
        p = random_spd(rng, 4)
        assert np.allclose(
            matrix_fn(p, "sqrt") @ matrix_fn(p, "invsqrt"), np.eye(4), atol=1e-10
        )

    def test_log_requires_spd(self):
        with pytest.raises(NotPositiveDefinite):
            matrix_fn(np.diag([1.0, -1.0]), "log")

    def test_unknown_function_rejected(self):
        with pytest.raises(InvalidInput):
            matrix_fn(np.eye(2), "cos")


class TestDistance:
    def test_self_distance_zero(self):
        rng = np.random.default_rng(4)
        p = random_spd(rng, 5)
        assert airm_distance(p, p) < 1e-12

    def test_symmetry(self):
        rng = np.random.default_rng(5)
        p, q = random_spd(rng, 4), random_spd(rng, 4)
        assert airm_distance(p, q) == pytest.approx(airm_distance(q, p), abs=1e-12)

    def test_congruence_invariance(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            n = rng.integers(2, 7)
            p, q = random_spd(rng, n), random_spd(rng, n)
            g = rng.standard_normal((n, n))
            d0 = airm_distance(p, q)
            d1 = airm_distance(g @ p @ g.T, g @ q @ g.T)
            assert d1 == pytest.approx(d0, abs=1e-9)

    def test_closed_form_commuting_case(self):
        # for commuting matrices the distance is the norm of log-eigenvalue gaps
        p = np.diag([1.0, 4.0, 9.0])
        q = np.diag([2.0, 4.0, 3.0])
        expected = np.sqrt(np.log(2.0) ** 2 + np.log(3.0) ** 2)
        assert airm_distance(p, q) == pytest.approx(expected, abs=1e-12)

    def test_inversion_invariance(self):
        rng = np.random.default_rng(7)
        p, q = random_spd(rng, 4), random_spd(rng, 4)
        assert airm_distance(np.linalg.inv(p), np.linalg.inv(q)) == pytest.approx(
            airm_distance(p, q), abs=1e-9
        )

    def test_triangle_inequality(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            n = rng.integers(2, 6)
            a, b, c = (random_spd(rng, n) for _ in range(3))
            assert airm_distance(a, c) <= (
                airm_distance(a, b) + airm_distance(b, c) + 1e-9
            )

    def test_accepts_wrappers(self):
        p = SpdMatrix(np.diag([1.0, 2.0]))
        q = SpdMatrix(np.diag([2.0, 2.0]))
        assert airm_distance(p, q) == pytest.approx(np.log(2.0), abs=1e-12)

    def test_rejects_non_spd(self):
        with pytest.raises(NotPositiveDefinite):
            airm_distance(np.diag([1.0, -1.0]), np.eye(2))


class TestExpLogMaps:
    def test_roundtrip(self):
        rng = np.random.default_rng(9)
        base, p = random_spd(rng, 4), random_spd(rng, 4)
        v = log_map(base, p)
        assert np.allclose(exp_map(base, v).values, p, atol=1e-9)

    def test_log_at_base_is_zero(self):
        rng = np.random.default_rng(10)
        base = random_spd(rng, 4)
        assert np.abs(log_map(base, base).values).max() < 1e-10

    def test_exp_map_reaches_claimed_distance(self):
        rng = np.random.default_rng(11)
        base = random_spd(rng, 3)
        v = random_sym(rng, 3, scale=0.3)
        isq = matrix_fn(base, "invsqrt")
        expected = np.linalg.norm(isq @ v @ isq, "fro")
        assert airm_distance(base, exp_map(base, v)) == pytest.approx(
            expected, abs=1e-9
        )


class TestFrechetMean:
    def test_single_matrix(self):
        rng = np.random.default_rng(12)
        p = random_spd(rng, 4)
        assert airm_distance(frechet_mean([p]), p) < 1e-8

    def test_two_point_closed_form(self):
        rng = np.random.default_rng(13)
        a, b = random_spd(rng, 5), random_spd(rng, 5)
        sq = matrix_fn(a, "sqrt")
        isq = matrix_fn(a, "invsqrt")
        midpoint = sq @ matrix_fn(isq @ b @ isq, "sqrt") @ sq
        assert airm_distance(frechet_mean([a, b]), midpoint) < 1e-7

    def test_permutation_invariance(self):
        rng = np.random.default_rng(14)
        mats = [random_spd(rng, 3) for _ in range(5)]
        m1 = frechet_mean(mats)
        m2 = frechet_mean(mats[::-1])
        assert airm_distance(m1, m2) < 1e-7

    def test_congruence_equivariance(self):
        rng = np.random.default_rng(15)
        mats = [random_spd(rng, 3) for _ in range(4)]
        g = rng.standard_normal((3, 3))
        moved = frechet_mean([g @ m @ g.T for m in mats]).values
        assert airm_distance(moved, g @ frechet_mean(mats).values @ g.T) < 1e-6

    def test_commuting_matrices_geometric_mean(self):
        mats = [np.diag([1.0, 8.0]), np.diag([4.0, 2.0]), np.diag([2.0, 4.0])]
        expected = np.diag([2.0, 4.0])  # elementwise geometric mean
        assert airm_distance(frechet_mean(mats), expected) < 1e-8

    def test_mean_stays_between(self):
        rng = np.random.default_rng(16)
        mats = [random_spd(rng, 4) for _ in range(6)]
        mean = frechet_mean(mats)
        radius = max(airm_distance(a, b) for a in mats for b in mats)
        assert all(airm_distance(mean, m) <= radius + 1e-9 for m in mats)

    def test_nonconvergence_carries_state(self):
        rng = np.random.default_rng(17)
        mats = [random_spd(rng, 4, spread=2.0) for _ in range(5)]
        with pytest.raises(NonConvergence) as err:
            frechet_mean(mats, tol=1e-15, max_iter=1)
        assert err.value.last is not None
        assert err.value.residual > 0

    def test_empty_input_rejected(self):
        with pytest.raises(InvalidInput):
            frechet_mean([])


class TestTangentVectorization:
    def test_dimension(self):
        rng = np.random.default_rng(18)
        base, p = random_spd(rng, 5), random_spd(rng, 5)
        assert tangent_vectorize(base, p).shape == (15,)

    def test_isometry_at_base(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            n = rng.integers(2, 8)
            base, p = random_spd(rng, n), random_spd(rng, n)
            vec = tangent_vectorize(base, p)
            assert np.linalg.norm(vec) == pytest.approx(
                airm_distance(base, p), abs=1e-9
            )

    def test_roundtrip(self):
        rng = np.random.default_rng(20)
        base, p = random_spd(rng, 4), random_spd(rng, 4)
        back = tangent_unvectorize(base, tangent_vectorize(base, p))
        assert np.allclose(back.values, p, atol=1e-9)

    def test_base_maps_to_origin(self):
        rng = np.random.default_rng(21)
        base = random_spd(rng, 4)
        assert np.abs(tangent_vectorize(base, base)).max() < 1e-10

    def test_batch_matches_single(self):
        rng = np.random.default_rng(22)
        base = random_spd(rng, 4)
        stack = np.stack([random_spd(rng, 4) for _ in range(6)])
        batch = batch_tangent_vectorize(base, stack)
        assert batch.shape == (6, 10)
        for i in range(6):
            assert np.allclose(batch[i], tangent_vectorize(base, stack[i]), atol=1e-10)
