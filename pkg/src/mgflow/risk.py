"""Closed-form estimation, Bayes, in-sample, and out-of-sample risks for the
momentum-flow, ridge, and gradient-flow families, a Monte Carlo oracle, and
the optimal-tuning rules.

Each family is a diagonal shrinkage in the V basis, so every risk is a
spectral sum over the per-direction residual factor R(s, tuning):

    R_mgf = H(s, t),  R_ridge = lambda / (s + lambda),  R_gf = exp(-s t).

Estimation risk sums (beta0' v_i)^2 R_i^2 + (sigma^2/n) (1-R_i)^2 / s_i; the
in-sample version weights both terms by s_i; Bayes versions replace
(beta0' v_i)^2 by (sigma^2/n) alpha; out-of-sample versions trace against the
feature covariance rotated into the V basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .estimators import FAMILIES
from .shrinkage import MomentumSpec, transfer
from .spectral import (
    CovarianceSpec,
    Dataset,
    PriorSpec,
    SpectralDecomposition,
    decompose,
    generate_gaussian_data,
    sample_prior,
)

KINDS = (
    "estimation",
    "bayes",
    "insample",
    "bayes_insample",
    "outsample",
    "bayes_outsample",
)


@dataclass(frozen=True)
class RiskPoint:
    tuning: float
    value: float


@dataclass(frozen=True)
class RiskCurve:
    """Risk values of one estimator family along an increasing tuning grid."""

    family: str
    kind: str
    tunings: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown risk kind {self.kind!r}")
        tunings = np.asarray(self.tunings, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if tunings.shape != values.shape or tunings.ndim != 1:
            raise ValueError("tunings and values must be matching 1-D arrays")
        if np.any(np.diff(tunings) <= 0):
            raise ValueError("tunings must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("risk values must be finite")
        object.__setattr__(self, "tunings", tunings)
        object.__setattr__(self, "values", values)

    @property
    def points(self) -> list[RiskPoint]:
        return [RiskPoint(float(t), float(v)) for t, v in zip(self.tunings, self.values)]


def default_t_grid(lo: float = 1e-2, hi: float = 1e2, count: int = 200) -> np.ndarray:
    """Log-spaced time grid covering both figure columns at desk scale."""
    return np.logspace(np.log10(lo), np.log10(hi), count)


# ---------------------------------------------------------------------------
# residual factors and the two spectral-sum engines
# ---------------------------------------------------------------------------

def _tuning_column(tuning, family):
    tuning = np.asarray(tuning, dtype=float)
    scalar = tuning.ndim == 0
    col = np.atleast_1d(tuning)[:, None]
    if family == "ridge":
        if np.any(col <= 0):
            raise ValueError("lambda must be positive")
    elif np.any(col < 0):
        raise ValueError("t must be nonnegative")
    return col, scalar


def _residual_factor(family, s, tuning, momentum):
    """R with shape (len(tuning), p); tuning already a column."""
    s_row = s[None, :]
    if family == "mgf":
        if momentum is None:
            raise ValueError("momentum spec required for the mgf family")
        momentum.check_admissible(s)
        return transfer(s_row, momentum.mu[None, :], tuning)
    if family == "ridge":
        return tuning / (s_row + tuning)
    if family == "gf":
        return np.exp(-s_row * tuning)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def _spectral_risk(family, s, bias_weights, noise_scale, tuning, momentum,
                   s_weighted):
    """Shared engine for estimation/in-sample risks and their Bayes versions.

    bias_weights holds (beta0' v_i)^2, or (sigma^2/n) * alpha broadcast for the
    Bayes variants.  s_weighted switches on the in-sample s_i weighting.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    col, scalar = _tuning_column(tuning, family)
    R = _residual_factor(family, s, col, momentum)
    phi = 1.0 - R
    if s_weighted:
        bias = (bias_weights[None, :] * s[None, :] * R * R).sum(axis=1)
        variance = noise_scale * (phi * phi).sum(axis=1)
    else:
        bias = (bias_weights[None, :] * R * R).sum(axis=1)
        variance = noise_scale * (phi * phi / s[None, :]).sum(axis=1)
    out = bias + variance
    return float(out[0]) if scalar else out


def _bias_weights_fixed(dec, beta0):
    beta0 = np.asarray(beta0, dtype=float)
    if beta0.shape != (dec.p,):
        raise ValueError(f"beta0 has shape {beta0.shape}, expected ({dec.p},)")
    proj = dec.V.T @ beta0
    return proj * proj


def _outsample_risk(family, dec, bias_weights_vec, noise_scale, cov, tuning,
                    momentum, bayes):
    """Out-of-sample engine; bias_weights_vec is V^T beta0 (fixed) or None (Bayes)."""
    cov.check_dim(dec.p)
    col, scalar = _tuning_column(tuning, family)
    R = _residual_factor(family, dec.s, col, momentum)
    phi = 1.0 - R
    sig = cov.rotated(dec.V)
    if bayes:
        per_dir = bias_weights_vec[None, :] * R * R + noise_scale * phi * phi / dec.s[None, :]
        if sig is None:
            out = per_dir.sum(axis=1)
        else:
            out = per_dir @ np.diagonal(sig)
    else:
        Q = R * bias_weights_vec[None, :]
        if sig is None:
            bias = (Q * Q).sum(axis=1)
            variance = noise_scale * (phi * phi / dec.s[None, :]).sum(axis=1)
        else:
            bias = np.einsum("ti,ij,tj->t", Q, sig, Q)
            variance = noise_scale * ((phi * phi / dec.s[None, :]) @ np.diagonal(sig))
        out = bias + variance
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# named closed forms
# ---------------------------------------------------------------------------

def risk_mgf(dec, beta0, sigma2, momentum, t):
    """Estimation risk of the momentum flow at time t, fixed beta0."""
    return _spectral_risk("mgf", dec.s, _bias_weights_fixed(dec, beta0),
                          sigma2 / dec.n, t, momentum, s_weighted=False)


def risk_ridge(dec, beta0, sigma2, lam):
    """Estimation risk of ridge at penalty lambda, fixed beta0."""
    return _spectral_risk("ridge", dec.s, _bias_weights_fixed(dec, beta0),
                          sigma2 / dec.n, lam, None, s_weighted=False)


def risk_gf(dec, beta0, sigma2, t):
    """Estimation risk of gradient flow at time t, fixed beta0."""
    return _spectral_risk("gf", dec.s, _bias_weights_fixed(dec, beta0),
                          sigma2 / dec.n, t, None, s_weighted=False)


def _bayes_weights(s, alpha, sigma2, n):
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if alpha <= 0 or sigma2 <= 0:
        raise ValueError("alpha and sigma2 must be positive")
    return s, np.full(len(s), (sigma2 / n) * alpha)


def bayes_risk_mgf(s, alpha, sigma2, n, momentum, t):
    """Bayes estimation risk (sigma^2/n) sum_i [alpha H^2 + (1-H)^2 / s_i]."""
    s, w = _bayes_weights(s, alpha, sigma2, n)
    return _spectral_risk("mgf", s, w, sigma2 / n, t, momentum, s_weighted=False)


def bayes_risk_ridge(s, alpha, sigma2, n, lam):
    """Bayes estimation risk (sigma^2/n) sum_i (alpha lambda^2 + s_i)/(s_i+lambda)^2."""
    s, w = _bayes_weights(s, alpha, sigma2, n)
    return _spectral_risk("ridge", s, w, sigma2 / n, lam, None, s_weighted=False)


def bayes_risk_gf(s, alpha, sigma2, n, t):
    """Bayes estimation risk of gradient flow."""
    s, w = _bayes_weights(s, alpha, sigma2, n)
    return _spectral_risk("gf", s, w, sigma2 / n, t, None, s_weighted=False)


def insample_risk_mgf(dec, beta0, sigma2, momentum, t):
    """In-sample prediction risk of the momentum flow, fixed beta0."""
    return _spectral_risk("mgf", dec.s, _bias_weights_fixed(dec, beta0),
                          sigma2 / dec.n, t, momentum, s_weighted=True)


def insample_risk_ridge(dec, beta0, sigma2, lam):
    """In-sample prediction risk of ridge, fixed beta0."""
    return _spectral_risk("ridge", dec.s, _bias_weights_fixed(dec, beta0),
                          sigma2 / dec.n, lam, None, s_weighted=True)


def insample_risk_gf(dec, beta0, sigma2, t):
    """In-sample prediction risk of gradient flow, fixed beta0."""
    return _spectral_risk("gf", dec.s, _bias_weights_fixed(dec, beta0),
                          sigma2 / dec.n, t, None, s_weighted=True)


def bayes_insample_risk_mgf(s, alpha, sigma2, n, momentum, t):
    """Bayes in-sample risk (sigma^2/n) sum_i [alpha s_i H^2 + (1-H)^2]."""
    s, w = _bayes_weights(s, alpha, sigma2, n)
    return _spectral_risk("mgf", s, w, sigma2 / n, t, momentum, s_weighted=True)


def bayes_insample_risk_ridge(s, alpha, sigma2, n, lam):
    """Bayes in-sample risk of ridge."""
    s, w = _bayes_weights(s, alpha, sigma2, n)
    return _spectral_risk("ridge", s, w, sigma2 / n, lam, None, s_weighted=True)


def bayes_insample_risk_gf(s, alpha, sigma2, n, t):
    """Bayes in-sample risk of gradient flow."""
    s, w = _bayes_weights(s, alpha, sigma2, n)
    return _spectral_risk("gf", s, w, sigma2 / n, t, None, s_weighted=True)


def outsample_risk_mgf(dec, beta0, sigma2, cov, momentum, t):
    """Out-of-sample prediction risk of the momentum flow, fixed beta0."""
    return _outsample_risk("mgf", dec, dec.V.T @ np.asarray(beta0, dtype=float),
                           sigma2 / dec.n, cov, t, momentum, bayes=False)


def outsample_risk_ridge(dec, beta0, sigma2, cov, lam):
    """Out-of-sample prediction risk of ridge, fixed beta0."""
    return _outsample_risk("ridge", dec, dec.V.T @ np.asarray(beta0, dtype=float),
                           sigma2 / dec.n, cov, lam, None, bayes=False)


def outsample_risk_gf(dec, beta0, sigma2, cov, t):
    """Out-of-sample prediction risk of gradient flow, fixed beta0."""
    return _outsample_risk("gf", dec, dec.V.T @ np.asarray(beta0, dtype=float),
                           sigma2 / dec.n, cov, t, None, bayes=False)


def bayes_outsample_risk_mgf(dec, alpha, sigma2, cov, momentum, t):
    """Bayes out-of-sample risk (sigma^2/n) tr[(alpha H^2 + S^{-1}(I-H)^2) V'SigmaV]."""
    _, w = _bayes_weights(dec.s, alpha, sigma2, dec.n)
    return _outsample_risk("mgf", dec, w, sigma2 / dec.n, cov, t, momentum, bayes=True)


def bayes_outsample_risk_ridge(dec, alpha, sigma2, cov, lam):
    """Bayes out-of-sample risk of ridge."""
    _, w = _bayes_weights(dec.s, alpha, sigma2, dec.n)
    return _outsample_risk("ridge", dec, w, sigma2 / dec.n, cov, lam, None, bayes=True)


def bayes_outsample_risk_gf(dec, alpha, sigma2, cov, t):
    """Bayes out-of-sample risk of gradient flow."""
    _, w = _bayes_weights(dec.s, alpha, sigma2, dec.n)
    return _outsample_risk("gf", dec, w, sigma2 / dec.n, cov, t, None, bayes=True)


def optimal_tuning(alpha: float) -> tuple[float, float]:
    """Optimal ridge penalty and the calibrated flow time: (1/alpha, sqrt(2 alpha))."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return 1.0 / alpha, float(np.sqrt(2.0 * alpha))


# ---------------------------------------------------------------------------
# experiment instances, curve evaluation, and the Monte Carlo oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RiskInstance:
    """A fixed design with its decomposition, friction, prior, and covariance."""

    dec: SpectralDecomposition
    momentum: MomentumSpec
    prior: PriorSpec
    beta0: np.ndarray
    cov: CovarianceSpec = field(default_factory=CovarianceSpec.identity)

    def __post_init__(self):
        self.cov.check_dim(self.dec.p)
        self.momentum.check_admissible(self.dec.s)

    @property
    def alpha(self) -> float:
        return self.prior.alpha

    @property
    def sigma2(self) -> float:
        return self.prior.sigma2

    @classmethod
    def gaussian(cls, n, p, r2=1.0, sigma2=1.0, delta=1e-3, seed=0,
                 cov: CovarianceSpec | None = None) -> "RiskInstance":
        """Seeded Gaussian design with a prior draw of the coefficient vector."""
        cov = cov if cov is not None else CovarianceSpec.identity()
        ds = generate_gaussian_data(n, p, cov, seed)
        dec = decompose(ds)
        prior = PriorSpec(r2=r2, sigma2=sigma2, n=n, p=p)
        beta0 = sample_prior(p, r2, seed + 1)
        momentum = MomentumSpec.from_spectrum(dec.s, delta)
        return cls(dec=dec, momentum=momentum, prior=prior, beta0=beta0, cov=cov)


def closed_form_risk(instance: RiskInstance, family: str, kind: str, tuning):
    """Dispatch to the closed-form risk of the given family and kind."""
    dec, mom, prior = instance.dec, instance.momentum, instance.prior
    momentum = mom if family == "mgf" else None
    if kind == "estimation":
        return _spectral_risk(family, dec.s, _bias_weights_fixed(dec, instance.beta0),
                              prior.noise_scale, tuning, momentum, s_weighted=False)
    if kind == "bayes":
        s, w = _bayes_weights(dec.s, prior.alpha, prior.sigma2, dec.n)
        return _spectral_risk(family, s, w, prior.noise_scale, tuning, momentum,
                              s_weighted=False)
    if kind == "insample":
        return _spectral_risk(family, dec.s, _bias_weights_fixed(dec, instance.beta0),
                              prior.noise_scale, tuning, momentum, s_weighted=True)
    if kind == "bayes_insample":
        s, w = _bayes_weights(dec.s, prior.alpha, prior.sigma2, dec.n)
        return _spectral_risk(family, s, w, prior.noise_scale, tuning, momentum,
                              s_weighted=True)
    if kind == "outsample":
        return _outsample_risk(family, dec, dec.V.T @ instance.beta0,
                               prior.noise_scale, instance.cov, tuning, momentum,
                               bayes=False)
    if kind == "bayes_outsample":
        _, w = _bayes_weights(dec.s, prior.alpha, prior.sigma2, dec.n)
        return _outsample_risk(family, dec, w, prior.noise_scale, instance.cov,
                               tuning, momentum, bayes=True)
    raise ValueError(f"unknown risk kind {kind!r}; expected one of {KINDS}")


def risk_curve(instance: RiskInstance, family: str, kind: str, grid) -> RiskCurve:
    """Evaluate one closed-form risk along a tuning grid."""
    grid = np.asarray(grid, dtype=float)
    values = closed_form_risk(instance, family, kind, grid)
    return RiskCurve(family=family, kind=kind, tunings=grid, values=values)


def monte_carlo_risk(instance: RiskInstance, family: str, kind: str, tuning,
                     trials: int, seed: int) -> tuple[float, float]:
    """Unbiased Monte Carlo estimate (mean, standard error) of a risk.

    Each trial samples a fresh response (and, for Bayes kinds, a fresh prior
    draw; for out-of-sample kinds, a fresh feature vector) and evaluates the
    squared error of the closed-form estimator path point.
    """
    if trials < 100:
        raise ValueError(f"need at least 100 trials, got {trials}")
    if kind not in KINDS:
        raise ValueError(f"unknown risk kind {kind!r}; expected one of {KINDS}")
    dec, prior = instance.dec, instance.prior
    n, p = dec.n, dec.p
    rng = np.random.default_rng(seed)
    tuning = float(tuning)
    momentum = instance.momentum if family == "mgf" else None
    col, _ = _tuning_column(tuning, family)
    phi = 1.0 - _residual_factor(family, dec.s, col, momentum)[0]

    bayes = kind.startswith("bayes")
    if bayes:
        B0 = rng.normal(0.0, np.sqrt(prior.r2 / p), size=(trials, p))
    else:
        B0 = np.tile(instance.beta0, (trials, 1))
    W0 = B0 @ dec.V

    X = dec.reconstruct()
    noise = np.sqrt(prior.sigma2) * rng.standard_normal((trials, n))
    Y = B0 @ X.T + noise
    ls_coords = (Y @ dec.U) / (np.sqrt(n) * np.sqrt(dec.s))
    err = phi[None, :] * ls_coords - W0  # V-basis estimator error per trial

    base = {"estimation": "estimation", "bayes": "estimation",
            "insample": "insample", "bayes_insample": "insample",
            "outsample": "outsample", "bayes_outsample": "outsample"}[kind]
    if base == "estimation":
        values = (err * err).sum(axis=1)
    elif base == "insample":
        values = (err * err * dec.s[None, :]).sum(axis=1)
    elif base == "outsample":
        root = instance.cov.sqrt_for(p)
        G = rng.standard_normal((trials, p))
        X0 = G if root is None else G @ root
        proj = ((X0 @ dec.V) * err).sum(axis=1)
        values = proj * proj
    else:
        raise AssertionError(base)
    mean = float(values.mean())
    se = float(values.std(ddof=1) / np.sqrt(trials))
    return mean, se
