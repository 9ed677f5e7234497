"""Decomposition against direct linear algebra, and sampling contracts."""

import numpy as np
import pytest

from mgflow import (
    CovarianceSpec,
    Dataset,
    PriorSpec,
    RankError,
    decompose,
    generate_gaussian_data,
    sample_prior,
    sample_response,
)


class TestDecompose:
    def test_scaled_identity(self):
        ds = Dataset(np.sqrt(2.0) * np.eye(2))
        dec = decompose(ds)
        np.testing.assert_allclose(dec.s, [1.0, 1.0], atol=1e-14)
        # U and V agree up to per-column sign
        np.testing.assert_allclose(np.abs(dec.U), np.eye(2), atol=1e-14)
        np.testing.assert_allclose(np.abs(dec.V), np.eye(2), atol=1e-14)

    def test_single_column(self):
        dec = decompose(Dataset(np.array([[2.0], [0.0]])))
        np.testing.assert_allclose(dec.s, [2.0], atol=1e-14)  # X'X/n = 4/2

    def test_reconstruction_and_orthonormality(self):
        rng = np.random.default_rng(11)
        X = rng.standard_normal((50, 20))
        dec = decompose(Dataset(X))
        resid = np.linalg.norm(X - dec.reconstruct(), 2)
        assert resid <= 1e-8 * np.linalg.norm(X, 2)
        p = dec.p
        assert np.linalg.norm(dec.U.T @ dec.U - np.eye(p), 2) <= 1e-10
        assert np.linalg.norm(dec.V.T @ dec.V - np.eye(p), 2) <= 1e-10
        assert np.all(np.diff(dec.s) <= 0) and dec.s[-1] > 0
        assert dec.s_max == dec.s[0]

    def test_matches_eigendecomposition(self):
        rng = np.random.default_rng(12)
        X = rng.standard_normal((40, 15))
        dec = decompose(Dataset(X))
        eigs = np.sort(np.linalg.eigvalsh(X.T @ X / 40))[::-1]
        np.testing.assert_allclose(dec.s, eigs, atol=1e-9)

    def test_rank_deficient_rejected(self):
        col = np.arange(10.0)
        X = np.column_stack([col, 2 * col, np.ones(10)])
        with pytest.raises(RankError):
            decompose(Dataset(X))

    def test_wide_matrix_rejected(self):
        with pytest.raises(ValueError):
            Dataset(np.ones((2, 3)))


class TestGaussianData:
    def test_deterministic(self):
        a = generate_gaussian_data(30, 10, CovarianceSpec.identity(), seed=5)
        b = generate_gaussian_data(30, 10, CovarianceSpec.identity(), seed=5)
        assert np.array_equal(a.X, b.X)
        c = generate_gaussian_data(30, 10, CovarianceSpec.identity(), seed=6)
        assert not np.array_equal(a.X, c.X)

    def test_scaled_identity_covariance(self):
        ident = generate_gaussian_data(20, 6, CovarianceSpec.identity(), seed=9)
        scaled = generate_gaussian_data(20, 6, CovarianceSpec.explicit(4.0 * np.eye(6)), seed=9)
        np.testing.assert_array_equal(scaled.X, 2.0 * ident.X)

    def test_spectrum_inside_inflated_mp_support(self):
        ds = generate_gaussian_data(1000, 500, CovarianceSpec.identity(), seed=1)
        s = decompose(ds).s
        gamma = 0.5
        lo = 0.5 * (1 - np.sqrt(gamma)) ** 2
        hi = 2.0 * (1 + np.sqrt(gamma)) ** 2
        assert s.min() > lo and s.max() < hi

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            generate_gaussian_data(10, 4, CovarianceSpec.explicit(np.eye(3)), seed=0)


class TestCovarianceSpec:
    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            CovarianceSpec.explicit(np.array([[1.0, 0.5], [0.2, 1.0]]))

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError):
            CovarianceSpec.explicit(np.array([[1.0, 0.0], [0.0, -0.5]]))

    def test_rotation_identity_marker(self):
        cov = CovarianceSpec.identity()
        assert cov.rotated(np.eye(3)) is None
        assert cov.sqrt_for(3) is None

    def test_explicit_sqrt(self):
        rng = np.random.default_rng(2)
        A = rng.standard_normal((4, 4))
        sigma = A @ A.T
        root = CovarianceSpec.explicit(sigma).sqrt_for(4)
        np.testing.assert_allclose(root @ root, sigma, atol=1e-10)


class TestResponseSampling:
    def test_noiseless(self):
        X = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        beta0 = np.array([2.0, -1.0])
        y = sample_response(X, beta0, 0.0, seed=0)
        np.testing.assert_array_equal(y, X @ beta0)

    def test_negative_variance_rejected(self):
        with pytest.raises(ValueError):
            sample_response(np.eye(2), np.ones(2), -1.0, seed=0)

    def test_mean_and_variance(self):
        # law of large numbers over 10^4 independent seeds
        X = np.array([[1.0, 2.0], [0.0, 1.0], [3.0, -1.0]])
        beta0 = np.array([0.5, 1.5])
        sigma2 = 2.0
        draws = np.array([sample_response(X, beta0, sigma2, seed=k) for k in range(10_000)])
        tol = 4.0 * np.sqrt(sigma2) / np.sqrt(10_000)
        np.testing.assert_allclose(draws.mean(axis=0), X @ beta0, atol=tol)
        assert abs(draws[:, 0].var(ddof=1) - sigma2) < 0.1 * sigma2


class TestPriorSampling:
    def test_signal_strength(self):
        draws = np.array([sample_prior(10, 4.0, seed=k) for k in range(10_000)])
        mean_sq = (draws**2).sum(axis=1).mean()
        assert abs(mean_sq - 4.0) < 0.05 * 4.0

    def test_reproducible(self):
        assert np.array_equal(sample_prior(7, 1.0, seed=42), sample_prior(7, 1.0, seed=42))

    def test_zero_signal_rejected(self):
        with pytest.raises(ValueError):
            sample_prior(5, 0.0, seed=0)


def test_prior_spec_alpha():
    prior = PriorSpec(r2=1.0, sigma2=1.0, n=1000, p=500)
    assert prior.alpha == 2.0
    assert prior.noise_scale == 1e-3
    with pytest.raises(ValueError):
        PriorSpec(r2=-1.0, sigma2=1.0, n=10, p=5)
