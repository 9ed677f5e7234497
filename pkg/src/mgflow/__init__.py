"""Momentum gradient flow for least squares: exact paths, risk curves, ridge
coupling bounds, and Marchenko-Pastur risk limits."""

from .asymptotics import (
    AsymptoticPrior,
    MPLaw,
    limiting_bayes_insample_mgf,
    limiting_bayes_insample_ridge,
    limiting_bayes_risk_mgf,
    limiting_bayes_risk_ridge,
    mp_density,
    mp_integrate,
)
from .bounds import (
    BoundReport,
    CALIBRATED_RISK_BOUND,
    OPTIMA_RATIO_BOUND,
    calibrated_ratio_reports,
    calibrated_sup_ratio,
    gf_reference_check,
    optima_ratio_check,
    optimum_summand_check,
    transfer_envelope_check,
)
from .estimators import (
    DivergenceError,
    MgdConfig,
    MgdTrajectory,
    discretization_gap,
    expected_sq_norm,
    fitted_values,
    gf_estimate,
    mgd_run,
    mgf_estimate,
    ols_estimate,
    ridge_estimate,
)
from .risk import (
    KINDS,
    RiskCurve,
    RiskInstance,
    RiskPoint,
    bayes_insample_risk_mgf,
    bayes_insample_risk_ridge,
    bayes_outsample_risk_mgf,
    bayes_outsample_risk_ridge,
    bayes_risk_gf,
    bayes_risk_mgf,
    bayes_risk_ridge,
    closed_form_risk,
    default_t_grid,
    insample_risk_mgf,
    insample_risk_ridge,
    monte_carlo_risk,
    optimal_tuning,
    outsample_risk_mgf,
    outsample_risk_ridge,
    risk_curve,
    risk_gf,
    risk_mgf,
    risk_ridge,
)
from .shrinkage import (
    CRITICAL,
    DEFAULT_RULE,
    MomentumRule,
    MomentumSpec,
    UnderdampedError,
    effective_regularizer,
    gf_t_to_lambda,
    lambda_to_t,
    phi_gf,
    phi_mgf,
    phi_ridge,
    t_to_lambda,
    transfer,
    transfer_ode_grid,
    transfer_ode_oracle,
)
from .spectral import (
    CovarianceSpec,
    Dataset,
    PriorSpec,
    RankError,
    SpectralDecomposition,
    decompose,
    generate_gaussian_data,
    sample_prior,
    sample_response,
)

__version__ = "0.1.0"
