"""Estimator paths: exact momentum flow, its discrete iteration, ridge, and
gradient flow, plus the flow/iteration discretization gap.

Everything is computed in the right-singular-vector basis, where each family
is a diagonal shrinkage of the least-squares coordinates:

    (V^T beta_hat)_i = phi(s_i, tuning) * (U^T y)_i / (sqrt(n) sqrt(s_i)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .shrinkage import MomentumSpec, phi_gf, phi_mgf, phi_ridge, transfer
from .spectral import SpectralDecomposition

# Discrete iterates larger than this multiple of the least-squares norm signal
# a misconfigured step size rather than a meaningful trajectory.
DIVERGENCE_FACTOR = 1e6

FAMILIES = ("mgf", "ridge", "gf")


class DivergenceError(RuntimeError):
    """Discrete momentum iterates exceeded the divergence guard."""


def _ls_coords(dec: SpectralDecomposition, y) -> np.ndarray:
    """Least-squares solution in the V basis: (U^T y) / (sqrt(n) sqrt(s))."""
    y = np.asarray(y, dtype=float)
    if y.shape != (dec.n,):
        raise ValueError(f"response has shape {y.shape}, expected ({dec.n},)")
    return (dec.U.T @ y) / (np.sqrt(dec.n) * np.sqrt(dec.s))


def ols_estimate(dec: SpectralDecomposition, y) -> np.ndarray:
    """Ordinary least-squares solution via the spectral decomposition."""
    return dec.V @ _ls_coords(dec, y)


def _shrinkage(dec, family, tuning, momentum=None):
    if family == "mgf":
        if momentum is None:
            raise ValueError("momentum spec required for the mgf family")
        momentum.check_admissible(dec.s)
        return phi_mgf(dec.s, momentum.mu, tuning)
    if family == "ridge":
        return phi_ridge(dec.s, tuning)
    if family == "gf":
        return phi_gf(dec.s, tuning)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def mgf_estimate(dec: SpectralDecomposition, y, momentum: MomentumSpec, t) -> np.ndarray:
    """Exact momentum-flow iterate at time t.

    Equals (1/sqrt(n)) V S^{-1} (I - H(S, t)) S^{1/2} U^T y; starts at zero and
    reaches the least-squares solution as t -> infinity.
    """
    momentum.check_admissible(dec.s)
    phi = phi_mgf(dec.s, momentum.mu, t)
    return dec.V @ (phi * _ls_coords(dec, y))


def ridge_estimate(dec: SpectralDecomposition, y, lam: float) -> np.ndarray:
    """Ridge solution (X^T X + n lambda I)^{-1} X^T y, computed spectrally."""
    phi = phi_ridge(dec.s, lam)
    return dec.V @ (phi * _ls_coords(dec, y))


def gf_estimate(dec: SpectralDecomposition, y, t) -> np.ndarray:
    """Gradient-flow iterate at time t (shrinkage 1 - exp(-s t))."""
    phi = phi_gf(dec.s, t)
    return dec.V @ (phi * _ls_coords(dec, y))


def fitted_values(dec: SpectralDecomposition, y, family: str, tuning,
                  momentum: MomentumSpec | None = None) -> np.ndarray:
    """X beta_hat computed spectrally as U diag(phi) U^T y."""
    phi = _shrinkage(dec, family, tuning, momentum)
    y = np.asarray(y, dtype=float)
    return dec.U @ (phi * (dec.U.T @ y))


@dataclass(frozen=True)
class MgdConfig:
    """Step size and iteration budget for the discrete momentum recursion.

    The rescaled iteration requires epsilon < 1 and mu_i < epsilon^{-1/2};
    epsilon^2 * s_max < 4 (checked at run time against the spectrum) keeps the
    undamped two-step recursion inside its stability interval.
    """

    epsilon: float
    k_max: int
    momentum: MomentumSpec

    def __post_init__(self):
        if not (0 < self.epsilon < 1):
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.k_max < 1:
            raise ValueError(f"k_max must be positive, got {self.k_max}")
        mu_cap = self.epsilon ** -0.5
        if np.any(self.momentum.mu >= mu_cap):
            raise ValueError(
                f"friction must stay below epsilon^(-1/2) = {mu_cap:.4g},"
                f" got max mu = {self.momentum.mu.max():.4g}"
            )


@dataclass(frozen=True)
class MgdTrajectory:
    """Discrete momentum iterates beta_0 .. beta_kmax with times t_k = k epsilon."""

    betas: np.ndarray  # shape (k_max + 1, p)
    times: np.ndarray  # shape (k_max + 1,)
    epsilon: float

    @property
    def k_max(self) -> int:
        return self.betas.shape[0] - 1

    def final(self) -> np.ndarray:
        return self.betas[-1]


def mgd_run(dec: SpectralDecomposition, y, config: MgdConfig) -> MgdTrajectory:
    """Run the rescaled discrete momentum iteration on the least-squares loss.

    Per V-basis coordinate i, with forcing c_i = sqrt(s_i) (U^T y)_i / sqrt(n):

        v_{k+1} = (1 - mu_i eps) v_k - eps (s_i w_k - c_i)
        w_{k+1} = w_k + eps v_{k+1}

    started from w_0 = 0, v_0 = -eps c_i / (2 (1 - mu_i eps)), which pins
    beta_1 = eps^2 X^T y / (2n) exactly.
    """
    config.momentum.check_admissible(dec.s)
    eps = config.epsilon
    if eps * eps * dec.s_max >= 4.0:
        raise ValueError(
            f"epsilon^2 * s_max = {eps * eps * dec.s_max:.4g} >= 4: unstable step size"
        )
    mu = config.momentum.mu
    s = dec.s
    ls = _ls_coords(dec, y)
    c = s * ls
    guard = DIVERGENCE_FACTOR * float(np.linalg.norm(ls))

    w = np.zeros(dec.p)
    v = -eps * c / (2.0 * (1.0 - mu * eps))
    W = np.empty((config.k_max + 1, dec.p))
    W[0] = w
    for k in range(1, config.k_max + 1):
        v = (1.0 - mu * eps) * v - eps * (s * w - c)
        w = w + eps * v
        if np.linalg.norm(w) > guard:
            raise DivergenceError(
                f"iterate norm exceeded {DIVERGENCE_FACTOR:g} x ||OLS|| at step {k}"
            )
        W[k] = w
    betas = W @ dec.V.T
    times = np.arange(config.k_max + 1) * eps
    return MgdTrajectory(betas=betas, times=times, epsilon=eps)


def discretization_gap(dec: SpectralDecomposition, y, momentum: MomentumSpec,
                       T: float, epsilon: float) -> float:
    """Worst deviation of the discrete iterates from the exact flow up to time T.

    Returns max over k <= floor(T / epsilon) of ||beta_mgf(t_k) - beta_k||;
    first order in epsilon.
    """
    if T <= 0:
        raise ValueError(f"T must be positive, got {T}")
    k_max = int(np.floor(T / epsilon))
    if k_max < 1:
        raise ValueError(f"T/epsilon = {T / epsilon:.3g} admits no iterations")
    config = MgdConfig(epsilon=epsilon, k_max=k_max, momentum=momentum)
    traj = mgd_run(dec, y, config)
    # Compare in the V basis; rotation preserves the norm.
    W = traj.betas @ dec.V
    ls = _ls_coords(dec, y)
    t_k = traj.times[1:]
    H = transfer(dec.s[None, :], momentum.mu[None, :], t_k[:, None])
    W_exact = (1.0 - H) * ls[None, :]
    return float(np.max(np.linalg.norm(W_exact - W[1:], axis=1)))


def expected_sq_norm(s, prior, family: str, tuning,
                     momentum: MomentumSpec | None = None):
    """E ||beta_hat||^2 under the spherical prior and noise model.

    Sums (r^2/p) phi_i^2 + (sigma^2/n) phi_i^2 / s_i over the spectrum; used to
    parameterize risk paths by estimator size.  Vectorized over the tuning.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if len(s) != prior.p:
        raise ValueError(f"spectrum has {len(s)} entries, prior expects p={prior.p}")
    tuning = np.asarray(tuning, dtype=float)
    t_col = np.atleast_1d(tuning)[:, None]
    if family == "mgf":
        if momentum is None:
            raise ValueError("momentum spec required for the mgf family")
        momentum.check_admissible(s)
        phi = phi_mgf(s[None, :], momentum.mu[None, :], t_col)
    elif family == "ridge":
        phi = phi_ridge(s[None, :], t_col)
    elif family == "gf":
        phi = phi_gf(s[None, :], t_col)
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    per_dir = (prior.r2 / prior.p) + prior.noise_scale / s[None, :]
    out = (phi * phi * per_dir).sum(axis=1)
    return float(out[0]) if tuning.ndim == 0 else out
