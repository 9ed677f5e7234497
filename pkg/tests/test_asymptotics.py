"""Limit-law quadrature against known moments, a simulated Wishart spectrum,
and finite-sample convergence of the Bayes risk curves."""

import numpy as np
import pytest

from mgflow import (
    AsymptoticPrior,
    MPLaw,
    bayes_insample_risk_mgf,
    bayes_insample_risk_ridge,
    bayes_risk_mgf,
    bayes_risk_ridge,
    decompose,
    generate_gaussian_data,
    limiting_bayes_insample_mgf,
    limiting_bayes_insample_ridge,
    limiting_bayes_risk_mgf,
    limiting_bayes_risk_ridge,
    mp_density,
    mp_integrate,
)
from mgflow.shrinkage import DEFAULT_RULE, MomentumSpec
from mgflow.spectral import CovarianceSpec, PriorSpec


class TestLaw:
    def test_edges_and_point_mass(self):
        law = MPLaw(0.5)
        assert law.a == pytest.approx((1 - np.sqrt(0.5)) ** 2)
        assert law.b == pytest.approx((1 + np.sqrt(0.5)) ** 2)
        assert law.point_mass_at_zero == 0.0
        assert MPLaw(2.0).point_mass_at_zero == pytest.approx(0.5)
        with pytest.raises(ValueError):
            MPLaw(0.0)

    def test_density_point_value(self):
        # gamma = 1: density sqrt((4-s)/s) / (2 pi); at s = 2 this is 1/(2 pi)
        assert mp_density(2.0, 1.0) == pytest.approx(1.0 / (2.0 * np.pi), abs=1e-14)

    def test_density_vanishes_outside_support(self):
        law = MPLaw(0.5)
        s = np.array([0.0, law.a - 1e-9, law.b + 1e-9, 10.0])
        np.testing.assert_array_equal(mp_density(s, 0.5), np.zeros(4))

    def test_density_mass(self):
        for gamma in (0.5, 1.0, 2.0):
            law = MPLaw(gamma)
            continuous = mp_integrate(lambda s: np.ones_like(s), gamma) - law.point_mass_at_zero
            assert continuous == pytest.approx(min(1.0, 1.0 / gamma), abs=1e-8)
            assert law.total_mass() == pytest.approx(1.0, abs=1e-10)


class TestQuadrature:
    @pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
    def test_first_two_moments(self, gamma):
        m1 = mp_integrate(lambda s: s, gamma)
        m2 = mp_integrate(lambda s: s * s, gamma)
        assert m1 == pytest.approx(1.0, abs=1e-8)
        assert m2 == pytest.approx(1.0 + gamma, abs=1e-6)

    def test_moments_match_simulated_wishart(self):
        # eigenvalues of a 2000 x 1000 Gaussian sample covariance
        n, p = 2000, 1000
        X = generate_gaussian_data(n, p, CovarianceSpec.identity(), seed=4).X
        eigs = np.linalg.eigvalsh(X.T @ X / n)
        gamma = p / n
        assert eigs.mean() == pytest.approx(mp_integrate(lambda s: s, gamma), rel=2e-2)
        assert (eigs**2).mean() == pytest.approx(
            mp_integrate(lambda s: s * s, gamma), rel=2e-2)

    def test_node_doubling_converged(self):
        for f in (lambda s: s * s, lambda s: 1.0 / (s + 0.3)):
            a = mp_integrate(f, 0.5, nodes=200)
            b = mp_integrate(f, 0.5, nodes=400)
            assert abs(a - b) < 1e-8

    def test_rejects_non_finite_integrand(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            with pytest.raises(ValueError):
                mp_integrate(lambda s: 1.0 / (s - s), 0.5)  # inf at every node
            with pytest.raises(ValueError):
                # finite on the bulk but no finite limit at the gamma>1 point mass
                mp_integrate(lambda s: np.where(s > 0, s, np.inf), 2.0)


class TestLimitingRisks:
    def test_flow_at_zero_is_signal_strength(self):
        prior = AsymptoticPrior.from_signal(r2=1.0, sigma2=1.0, gamma=0.5)
        assert prior.alpha0 == pytest.approx(2.0)
        val = limiting_bayes_risk_mgf(0.5, prior, DEFAULT_RULE, 0.0)
        assert val == pytest.approx(1.0, abs=1e-10)

    def test_ridge_large_lambda_is_signal_strength(self):
        prior = AsymptoticPrior.from_signal(1.0, 1.0, 0.5)
        val = limiting_bayes_risk_ridge(0.5, prior, 1e8)
        assert val == pytest.approx(1.0, rel=1e-6)

    def test_point_mass_floor_above_one(self):
        # gamma = 2: unfit mass keeps the risk above r^2 (1 - 1/gamma)
        prior = AsymptoticPrior.from_signal(1.0, 1.0, 2.0)
        late = limiting_bayes_risk_mgf(2.0, prior, DEFAULT_RULE, 1e6)
        assert late >= 0.5

    def test_insample_at_zero_uses_first_moment(self):
        prior = AsymptoticPrior.from_signal(1.0, 1.0, 0.5)
        val = limiting_bayes_insample_mgf(0.5, prior, DEFAULT_RULE, 0.0)
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_estimation_and_insample_agree_as_spectrum_concentrates(self):
        # gamma -> 0: the spectrum collapses to s = 1 and the s-weighting is idle
        gamma = 0.01
        prior = AsymptoticPrior.from_signal(1.0, 1.0, gamma)
        for t in (0.5, 2.0):
            est = limiting_bayes_risk_mgf(gamma, prior, DEFAULT_RULE, t)
            ins = limiting_bayes_insample_mgf(gamma, prior, DEFAULT_RULE, t)
            assert ins == pytest.approx(est, rel=0.05)

    def test_rejects_bad_tuning(self):
        prior = AsymptoticPrior.from_signal(1.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            limiting_bayes_risk_mgf(0.5, prior, DEFAULT_RULE, -1.0)
        with pytest.raises(ValueError):
            limiting_bayes_risk_ridge(0.5, prior, 0.0)


class TestFiniteSampleConvergence:
    def test_risk_curves_match_at_reference_scale(self, reference_scale_instance):
        inst = reference_scale_instance
        gamma = 0.5
        prior = AsymptoticPrior.from_signal(1.0, 1.0, gamma)
        t = np.logspace(np.log10(0.1), np.log10(50.0), 25)
        fin_m = bayes_risk_mgf(inst.dec.s, inst.alpha, inst.sigma2, inst.dec.n,
                               inst.momentum, t)
        lim_m = np.array([limiting_bayes_risk_mgf(gamma, prior, DEFAULT_RULE, ti)
                          for ti in t])
        assert np.max(np.abs(fin_m - lim_m) / lim_m) <= 0.02
        lam = 2.0 / t**2
        fin_r = bayes_risk_ridge(inst.dec.s, inst.alpha, inst.sigma2, inst.dec.n, lam)
        lim_r = np.array([limiting_bayes_risk_ridge(gamma, prior, li) for li in lam])
        assert np.max(np.abs(fin_r - lim_r) / lim_r) <= 0.02

    def test_insample_matches_at_reference_scale(self, reference_scale_instance):
        inst = reference_scale_instance
        prior = AsymptoticPrior.from_signal(1.0, 1.0, 0.5)
        for t in (0.5, 2.0, 10.0):
            fin = bayes_insample_risk_mgf(inst.dec.s, inst.alpha, inst.sigma2,
                                          inst.dec.n, inst.momentum, t)
            lim = limiting_bayes_insample_mgf(0.5, prior, DEFAULT_RULE, t)
            assert abs(fin - lim) / lim <= 0.02
        lam = 0.5
        fin = bayes_insample_risk_ridge(inst.dec.s, inst.alpha, inst.sigma2,
                                        inst.dec.n, lam)
        lim = limiting_bayes_insample_ridge(0.5, prior, lam)
        assert abs(fin - lim) / lim <= 0.02

    def test_error_shrinks_with_sample_size(self):
        gamma, t = 0.5, 2.0
        prior = AsymptoticPrior.from_signal(1.0, 1.0, gamma)
        limit = limiting_bayes_risk_mgf(gamma, prior, DEFAULT_RULE, t)
        errors = []
        for n in (250, 500, 1000, 2000):
            p = int(gamma * n)
            dec = decompose(generate_gaussian_data(n, p, CovarianceSpec.identity(), seed=13))
            mom = MomentumSpec.from_spectrum(dec.s, delta=1e-3)
            alpha = PriorSpec(r2=1.0, sigma2=1.0, n=n, p=p).alpha
            fin = bayes_risk_mgf(dec.s, alpha, 1.0, n, mom, t)
            errors.append(abs(fin - limit))
        # monotone decrease, allowing one random-seed violation
        violations = sum(1 for a, b in zip(errors, errors[1:]) if b >= a)
        assert violations <= 1
        assert errors[-1] < errors[0]
