"""Envelope and risk-ratio bound checks, including the demonstrable failure
of the envelopes for friction far above critical."""

import numpy as np
import pytest

from mgflow import (
    BoundReport,
    CALIBRATED_RISK_BOUND,
    OPTIMA_RATIO_BOUND,
    RiskInstance,
    bayes_risk_mgf,
    bayes_risk_ridge,
    calibrated_ratio_reports,
    calibrated_sup_ratio,
    gf_reference_check,
    optima_ratio_check,
    optimum_summand_check,
    risk_curve,
    t_to_lambda,
    transfer_envelope_check,
)
from mgflow.bounds import RATIO_BOUND_KINDS
from mgflow.shrinkage import CRITICAL, MomentumRule

PEAK_ENVELOPE_VALUE = 9.0 * np.exp(-2.0)  # analytic sup of the first ratio at criticality


class TestTransferEnvelopes:
    def test_critical_damping_suprema(self):
        env_h, env_c = transfer_envelope_check(rule=CRITICAL)
        assert env_h.satisfied and env_h.bound == 1.24
        assert abs(env_h.sup_ratio - PEAK_ENVELOPE_VALUE) <= 1e-3
        # analytic maximizer sits at sqrt(s) * t = 2
        s_arg, t_arg = env_h.argmax
        assert np.sqrt(s_arg) * t_arg == pytest.approx(2.0, rel=0.05)
        assert env_c.satisfied and env_c.bound == 1.04
        assert env_c.sup_ratio < 1.04

    def test_default_offset_still_inside(self):
        env_h, env_c = transfer_envelope_check(rule=MomentumRule(1e-3))
        assert env_h.satisfied and env_c.satisfied

    def test_refinement_stability(self):
        coarse = transfer_envelope_check(rule=CRITICAL)
        fine = transfer_envelope_check(np.logspace(-3, 1, 200),
                                       np.linspace(0.0, 40.0, 800), rule=CRITICAL)
        assert abs(coarse[0].sup_ratio - fine[0].sup_ratio) < 1e-3
        assert abs(coarse[1].sup_ratio - fine[1].sup_ratio) < 1e-3

    def test_single_point_limits(self):
        env_h, env_c = transfer_envelope_check(np.array([1.0]), np.array([0.0]),
                                               rule=CRITICAL)
        assert env_h.sup_ratio == pytest.approx(1.0, abs=1e-12)
        assert env_c.sup_ratio == pytest.approx(1.0, abs=1e-12)

    def test_fails_far_from_critical(self):
        # friction far above 2*sqrt(s) slows the decay enough to break the
        # envelope, which is why the rule is a parameter
        env_h, _ = transfer_envelope_check(rule=MomentumRule(10.0))
        assert not env_h.satisfied
        assert env_h.sup_ratio > 2.0

    def test_rejects_bad_grids(self):
        with pytest.raises(ValueError):
            transfer_envelope_check(np.array([-1.0]), np.array([0.0]))


class TestOptimumSummand:
    def test_operational_bound_holds(self):
        op, printed = optimum_summand_check(rule=CRITICAL)
        assert op.satisfied
        assert 1.02 < op.sup_ratio < OPTIMA_RATIO_BOUND
        # the alternative normalization only matches at alpha = 1 and is far
        # above the constant elsewhere; reported, never asserted
        assert not printed.satisfied
        assert printed.sup_ratio > 10.0

    def test_alternative_normalization_at_alpha_one(self):
        op, printed = optimum_summand_check(alpha_grid=np.array([1.0]), rule=CRITICAL)
        assert printed.satisfied
        assert printed.sup_ratio == pytest.approx(op.sup_ratio, rel=1e-12)

    def test_small_offset_close_to_critical(self):
        op, _ = optimum_summand_check(rule=MomentumRule(1e-3))
        assert op.satisfied


@pytest.fixture(scope="module")
def bench_instance():
    return RiskInstance.gaussian(100, 50, seed=0)


class TestCalibratedRatio:
    def test_all_kinds_below_bound(self, bench_instance):
        t_grid = np.logspace(-2, 2, 200)
        reports = calibrated_ratio_reports(bench_instance, t_grid)
        assert set(reports) == set(RATIO_BOUND_KINDS)
        for rep in reports.values():
            assert rep.satisfied, rep
            assert rep.sup_ratio > 1.0

    def test_ratio_approaches_one_at_small_t(self, bench_instance):
        inst = bench_instance
        m = bayes_risk_mgf(inst.dec.s, inst.alpha, inst.sigma2, inst.dec.n,
                           inst.momentum, 1e-4)
        r = bayes_risk_ridge(inst.dec.s, inst.alpha, inst.sigma2, inst.dec.n,
                             t_to_lambda(1e-4))
        assert m / r == pytest.approx(1.0, abs=1e-4)

    def test_vector_invariant_along_grid(self, bench_instance):
        # pointwise, not just at the sup
        inst = bench_instance
        t_grid = np.logspace(-2, 2, 200)
        m = bayes_risk_mgf(inst.dec.s, inst.alpha, inst.sigma2, inst.dec.n,
                           inst.momentum, t_grid)
        r = bayes_risk_ridge(inst.dec.s, inst.alpha, inst.sigma2, inst.dec.n,
                             t_to_lambda(t_grid))
        assert np.all(m < CALIBRATED_RISK_BOUND * r)

    def test_curve_interface_and_grid_mismatch(self, bench_instance):
        inst = bench_instance
        t_grid = np.logspace(-1, 1, 50)
        mgf_curve = risk_curve(inst, "mgf", "bayes", t_grid)
        lam_sorted = np.sort(t_to_lambda(t_grid))
        ridge_curve = risk_curve(inst, "ridge", "bayes", lam_sorted)
        rep = calibrated_sup_ratio(mgf_curve, ridge_curve)
        assert rep.satisfied
        direct = calibrated_ratio_reports(inst, t_grid, kinds=("bayes",))["bayes"]
        assert rep.sup_ratio == pytest.approx(direct.sup_ratio, rel=1e-12)
        bad_ridge = risk_curve(inst, "ridge", "bayes", lam_sorted * 1.5)
        with pytest.raises(ValueError):
            calibrated_sup_ratio(mgf_curve, bad_ridge)
        other_kind = risk_curve(inst, "ridge", "insample", lam_sorted)
        with pytest.raises(ValueError):
            calibrated_sup_ratio(mgf_curve, other_kind)


class TestOptimaRatio:
    def test_interval_on_random_instance(self, bench_instance):
        inst = bench_instance
        cal, inf = optima_ratio_check(inst.dec.s, inst.alpha, inst.sigma2,
                                      inst.dec.n, inst.momentum)
        assert cal.satisfied and inf.satisfied
        # the grid infimum can only improve on the calibrated point
        assert inf.sup_ratio <= cal.sup_ratio + 1e-12
        assert inf.sup_ratio >= 1.0 - 1e-9

    def test_scalar_spectrum(self):
        from mgflow import MomentumSpec
        s = np.array([1.0])
        mom = MomentumSpec.from_spectrum(s, delta=0.0)
        cal, inf = optima_ratio_check(s, 1.0, 1.0, 1, mom)
        assert cal.satisfied and inf.satisfied
        assert 1.0 < cal.sup_ratio < OPTIMA_RATIO_BOUND

    def test_alpha_sweep(self, bench_instance):
        inst = bench_instance
        for alpha in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
            cal, inf = optima_ratio_check(inst.dec.s, alpha, inst.sigma2,
                                          inst.dec.n, inst.momentum)
            assert cal.satisfied and inf.satisfied, (alpha, cal, inf)


class TestGfReference:
    def test_ceilings_hold(self, bench_instance):
        inst = bench_instance
        t_grid = np.logspace(-2, 2, 200)
        reps = gf_reference_check(inst.dec.s, inst.alpha, inst.sigma2, inst.dec.n, t_grid)
        assert reps["sup"].satisfied
        assert reps["optima"].satisfied
        assert reps["optima_grid_inf"].satisfied

    def test_flow_couples_tighter_than_gf(self, bench_instance):
        inst = bench_instance
        t_grid = np.logspace(-2, 2, 200)
        mgf_sup = calibrated_ratio_reports(inst, t_grid, kinds=("bayes",))["bayes"]
        gf_reps = gf_reference_check(inst.dec.s, inst.alpha, inst.sigma2,
                                     inst.dec.n, t_grid)
        assert mgf_sup.sup_ratio < gf_reps["sup"].sup_ratio


def test_bound_report_satisfied_semantics():
    assert BoundReport("x", 1.2, (0.0,), 1.24).satisfied
    assert not BoundReport("x", 1.25, (0.0,), 1.24).satisfied
    assert BoundReport("x", 1.01, (0.0,), 1.035, lower=1.0).satisfied
    assert not BoundReport("x", 0.99, (0.0,), 1.035, lower=1.0).satisfied
