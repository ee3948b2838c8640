"""Shrinkage operators and the observed-set projection."""

import numpy as np
import pytest

from oracles import tsvt_constant_oracle
from tubal import (
    PenaltyParams,
    generalized_soft_threshold,
    generalized_tsvt,
    generalized_tsvt_diag,
    penalty_derivative,
    project_observed,
    q_rank_value,
    q_sparsity_value,
    soft_threshold,
    spectral_singular_values,
    tensor_nuclear_norm,
)


class TestSoftThreshold:
    def test_basic(self):
        assert soft_threshold(5.0, 2.0) == 3.0
        assert soft_threshold(-1.0, 2.0) == 0.0
        assert soft_threshold(-5.0, 2.0) == -3.0

    def test_zero_threshold_is_identity(self):
        z = np.random.default_rng(0).standard_normal(20)
        assert np.array_equal(soft_threshold(z, 0.0), z)

    def test_negative_threshold_rejected(self):
        with pytest.raises(ValueError):
            soft_threshold(1.0, -0.5)


class TestGeneralizedSoftThreshold:
    def test_zero_weights_identity(self):
        x = np.random.default_rng(1).standard_normal((3, 4, 2))
        assert np.array_equal(generalized_soft_threshold(x, np.zeros_like(x)), x)

    def test_constant_weights_reduce_to_plain(self):
        x = np.random.default_rng(2).standard_normal((3, 4, 2))
        w = np.full(x.shape, 0.7)
        assert np.array_equal(generalized_soft_threshold(x, w), soft_threshold(x, 0.7))

    def test_shape_and_sign_errors(self):
        x = np.zeros((2, 2, 2))
        with pytest.raises(Exception):
            generalized_soft_threshold(x, np.zeros((2, 2, 3)))
        with pytest.raises(ValueError):
            generalized_soft_threshold(x, np.full(x.shape, -1.0))

    def test_never_grows_never_flips(self):
        rng = np.random.default_rng(3)
        x = 2.0 * rng.standard_normal((4, 4, 3))
        w = np.abs(rng.standard_normal(x.shape))
        out = generalized_soft_threshold(x, w)
        assert np.all(np.abs(out) <= np.abs(x) + 1e-15)
        assert np.all(out * x >= 0.0)

    @pytest.mark.parametrize("kind", ["scad", "mcp"])
    def test_flat_region_passthrough(self, kind):
        p = PenaltyParams(kind, 1.0, 3.0)
        x = np.full((2, 2, 2), 10.0)  # beyond gamma*lam, derivative 0
        w = penalty_derivative(p, np.abs(x))
        assert np.array_equal(generalized_soft_threshold(x, w), x)

    @pytest.mark.parametrize("kind", ["scad", "mcp"])
    def test_minimizes_linearized_objective(self, kind):
        p = PenaltyParams(kind, 1.0, 4.0)
        rng = np.random.default_rng(4)
        mu = 1.3
        y = 2.0 * rng.standard_normal((4, 4, 3))
        x_old = 2.0 * rng.standard_normal((4, 4, 3))
        w = penalty_derivative(p, np.abs(x_old)) / mu
        out = generalized_soft_threshold(y, w)

        def objective(x):
            return q_sparsity_value(p, x, x_old) + 0.5 * mu * np.sum((x - y) ** 2)

        f0 = objective(out)
        for _ in range(100):
            assert f0 <= objective(out + 1e-3 * rng.standard_normal(out.shape)) + 1e-9


class TestGeneralizedTSVT:
    def test_zero_weights_reconstruct(self):
        y = np.random.default_rng(5).standard_normal((4, 3, 5))
        out = generalized_tsvt(y, np.zeros_like(y))
        assert np.linalg.norm(out - y) <= 1e-8 * np.linalg.norm(y)

    def test_constant_weight_small_example(self):
        y = np.zeros((2, 2, 3))
        y[0, 0, :] = 3.0
        y[1, 1, :] = 4.0
        w = np.zeros_like(y)
        w[0, 0, :] = 1.0
        w[1, 1, :] = 1.0
        out = generalized_tsvt(y, w)
        expected = np.zeros_like(y)
        expected[0, 0, :] = 8.0 / 3.0
        expected[1, 1, :] = 11.0 / 3.0
        assert np.allclose(out, expected, atol=1e-10)
        assert np.allclose(out, tsvt_constant_oracle(y, 1.0), atol=1e-10)

    def test_constant_weight_matches_oracle(self):
        rng = np.random.default_rng(6)
        for tau in (0.1, 1.0, 5.0):
            y = rng.standard_normal((5, 4, 4))
            wd = np.full((4, 4), tau)
            out = generalized_tsvt_diag(y, wd)
            assert np.linalg.norm(out - tsvt_constant_oracle(y, tau)) <= 1e-10 * max(
                1.0, np.linalg.norm(y))

    def test_never_increases_tnn(self):
        rng = np.random.default_rng(7)
        y = rng.standard_normal((5, 5, 3))
        wd = np.abs(rng.standard_normal((5, 1))) * np.ones((5, 3))
        out = generalized_tsvt_diag(y, wd)
        assert tensor_nuclear_norm(out) <= tensor_nuclear_norm(y) + 1e-10
        assert np.all(spectral_singular_values(out) <= spectral_singular_values(y) + 1e-8)

    @pytest.mark.parametrize("kind", ["scad", "mcp"])
    def test_flat_region_passthrough(self, kind):
        # all spectral singular values beyond gamma*lam: weights vanish
        p = PenaltyParams(kind, 1.0, 2.0)
        y = np.zeros((2, 2, 2))
        y[0, 0, :] = [50.0, 10.0]  # spectral values 60, 40
        y[1, 1, :] = [30.0, 5.0]   # spectral values 35, 25
        sv = spectral_singular_values(y)
        assert np.all(sv > p.gamma * p.lam)
        wd = penalty_derivative(p, sv)
        assert np.all(wd == 0.0)
        out = generalized_tsvt_diag(y, wd)
        assert np.linalg.norm(out - y) <= 1e-8 * np.linalg.norm(y)

    @pytest.mark.parametrize("kind", ["scad", "mcp"])
    def test_minimizes_linearized_objective(self, kind):
        p = PenaltyParams(kind, 1.0, 4.0)
        rng = np.random.default_rng(8)
        mu = 1.0
        y = rng.standard_normal((5, 5, 4))
        x_old = rng.standard_normal((5, 5, 4))
        wd = penalty_derivative(p, spectral_singular_values(x_old)) / mu
        out = generalized_tsvt_diag(y, wd)

        def objective(x):
            return q_rank_value(p, x, x_old) + 0.5 * mu * np.sum((x - y) ** 2)

        f0 = objective(out)
        for _ in range(100):
            assert f0 <= objective(out + 1e-3 * rng.standard_normal(out.shape)) + 1e-9

    def test_off_diagonal_support_rejected(self):
        y = np.random.default_rng(9).standard_normal((3, 3, 2))
        w = np.zeros_like(y)
        w[0, 1, 0] = 0.5
        with pytest.raises(ValueError):
            generalized_tsvt(y, w)

    def test_asymmetric_weights_rejected(self):
        y = np.random.default_rng(10).standard_normal((3, 3, 4))
        wd = np.zeros((3, 4))
        wd[:, 1] = 1.0  # mirror slice 3 left at zero
        with pytest.raises(ValueError):
            generalized_tsvt_diag(y, wd)

    def test_negative_weights_rejected(self):
        y = np.random.default_rng(11).standard_normal((3, 3, 2))
        with pytest.raises(ValueError):
            generalized_tsvt_diag(y, np.full((3, 2), -1.0))


class TestProjectObserved:
    def test_all_ones(self):
        rng = np.random.default_rng(12)
        m, o = rng.standard_normal((3, 3, 2)), rng.standard_normal((3, 3, 2))
        assert np.array_equal(project_observed(m, o, np.ones_like(m)), o)

    def test_all_zeros(self):
        rng = np.random.default_rng(13)
        m, o = rng.standard_normal((3, 3, 2)), rng.standard_normal((3, 3, 2))
        assert np.array_equal(project_observed(m, o, np.zeros_like(m)), m)

    def test_idempotent_and_exact(self):
        rng = np.random.default_rng(14)
        m, o = rng.standard_normal((4, 3, 2)), rng.standard_normal((4, 3, 2))
        mask = (rng.uniform(size=m.shape) < 0.5).astype(float)
        once = project_observed(m, o, mask)
        assert np.array_equal(project_observed(once, o, mask), once)
        assert np.array_equal(once[mask == 1.0], o[mask == 1.0])
        assert np.array_equal(once[mask == 0.0], m[mask == 0.0])

    def test_mask_validation(self):
        m = np.zeros((2, 2, 2))
        with pytest.raises(Exception):
            project_observed(m, m, np.full(m.shape, 0.5))
