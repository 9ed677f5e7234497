"""Scalar transfer function of momentum gradient flow and spectral shrinkage maps.

Per eigendirection with eigenvalue s and friction mu >= 2*sqrt(s), the flow's
residual factor H(s, t) solves

    h'' + mu h' + s h = 0,   h(0) = 1,  h'(0) = 0,

and the fitted fraction is phi = 1 - H.  Writing d = sqrt(mu^2 - 4 s), the
solution is

    H(s, t) = exp(-mu t / 2) * [cosh(d t / 2) + (mu t / 2) * sinhc(d t / 2)],

which stays finite and cancellation-free through the critical-damping limit
d -> 0.  The equivalent two-exponential form A exp(r+ t) + B exp(r- t) with
A = (mu + d) / (2 d), B = (d - mu) / (2 d), r± = (-mu ± d) / 2 is used only far
from criticality where cosh would overflow; there r+ is evaluated as
-2 s / (mu + d) to avoid the d - mu cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative slack when classifying mu^2 - 4 s as nonnegative: admits the exact
# critical-damping rule mu = 2*sqrt(s) whose discriminant rounds to ~ -eps * s.
_DISC_RTOL = 1e-12

# Beyond this value of d*t/2 the cosh/sinh pair is split into exponentials.
_FARFIELD_X = 30.0

_SINHC_SMALL = 1e-4


class UnderdampedError(ValueError):
    """Friction below 2*sqrt(s): the oscillatory regime is out of scope."""


def sinhc(x):
    """sinh(x)/x with a 5-term series below |x| = 1e-4 (sinhc(0) = 1)."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) < _SINHC_SMALL
    x2 = x[small] ** 2
    out[small] = 1.0 + x2 * (1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (1.0 / 5040.0 + x2 / 362880.0)))
    xl = x[~small]
    out[~small] = np.sinh(xl) / xl
    return out


def _discriminant(s, mu):
    """mu^2 - 4 s clipped to zero at the admissibility boundary.

    Raises UnderdampedError naming the first offending flat index.
    """
    disc = mu * mu - 4.0 * s
    tol = _DISC_RTOL * (mu * mu + 4.0 * s)
    bad = disc < -tol
    if np.any(bad):
        i = int(np.argmax(bad))
        raise UnderdampedError(
            f"mu < 2*sqrt(s) at index {i}: mu={mu.flat[i]:.6g},"
            f" 2*sqrt(s)={2.0 * np.sqrt(s.flat[i]):.6g}"
        )
    return np.maximum(disc, 0.0)


def transfer(s, mu, t):
    """Residual factor H(s, t) of the momentum flow; elementwise with broadcasting.

    Parameters
    ----------
    s : nonnegative eigenvalue(s) of the sample covariance.
    mu : friction coefficient(s), mu >= 2*sqrt(s).
    t : time(s), t >= 0.

    Returns
    -------
    H in (0, 1]; H(s, 0) = 1, H(0, t) = 1, and H is strictly decreasing in t
    for s > 0.  Scalar inputs give a float.
    """
    s, mu, t = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (s, mu, t))
    )
    scalar = s.ndim == 0
    s, mu, t = np.atleast_1d(s, mu, t)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    d = np.sqrt(_discriminant(s, mu))
    x = 0.5 * d * t
    out = np.empty_like(x)

    near = x <= _FARFIELD_X
    half = 0.5 * mu[near] * t[near]
    out[near] = np.exp(-half) * (np.cosh(x[near]) + half * sinhc(x[near]))

    far = ~near
    if np.any(far):
        df, mf, tf = d[far], mu[far], t[far]
        r_plus = -2.0 * s[far] / (mf + df)
        r_minus = -0.5 * (mf + df)
        a = (mf + df) / (2.0 * df)
        b = (df - mf) / (2.0 * df)
        out[far] = a * np.exp(r_plus * tf) + b * np.exp(r_minus * tf)

    return float(out[0]) if scalar else out


def transfer_ode_oracle(s: float, mu: float, t: float, step: float = 1e-4) -> float:
    """Independent check of `transfer` by classical RK4 integration.

    Integrates h'' + mu h' + s h = 0 from (1, 0) to time t with a fixed step;
    global error O(step^4).  The step must satisfy step <= 1e-3 * min(1, 1/mu).
    """
    if step > 1e-3 * min(1.0, 1.0 / mu) + 1e-15:
        raise ValueError(f"step {step:g} too coarse for mu={mu:g}")
    h, _ = _rk4_solve(
        np.asarray([s], dtype=float), np.asarray([mu], dtype=float), float(t), step
    )
    return float(h[0])


def transfer_ode_grid(s, mu, t_grid, step: float = 1e-4) -> np.ndarray:
    """RK4 solution sampled along an increasing time grid, batched over s.

    Returns an array of shape (len(t_grid), len(s)).  One integration covers
    the whole grid, so this is the economical way to validate `transfer` on a
    (s, t) mesh.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be non-decreasing")
    if step > 1e-3 * min(1.0, 1.0 / mu.max()) + 1e-15:
        raise ValueError(f"step {step:g} too coarse for mu_max={mu.max():g}")

    h = np.ones_like(s)
    u = np.zeros_like(s)
    out = np.empty((len(t_grid), len(s)))
    t_prev = 0.0
    for j, t in enumerate(t_grid):
        seg = t - t_prev
        if seg > 0:
            h, u = _rk4_advance(s, mu, h, u, seg, step)
        out[j] = h
        t_prev = t
    return out


def _rk4_solve(s, mu, t, step):
    h = np.ones_like(s)
    u = np.zeros_like(s)
    if t > 0:
        h, u = _rk4_advance(s, mu, h, u, t, step)
    return h, u


def _rk4_advance(s, mu, h, u, duration, step):
    # Sub-steps chosen so the requested step is an upper bound and the segment
    # endpoint is hit exactly.
    nsub = max(1, int(np.ceil(duration / step)))
    dt = duration / nsub
    for _ in range(nsub):
        k1h = u
        k1u = -mu * u - s * h
        h2 = h + 0.5 * dt * k1h
        u2 = u + 0.5 * dt * k1u
        k2h = u2
        k2u = -mu * u2 - s * h2
        h3 = h + 0.5 * dt * k2h
        u3 = u + 0.5 * dt * k2u
        k3h = u3
        k3u = -mu * u3 - s * h3
        h4 = h + dt * k3h
        u4 = u + dt * k3u
        k4h = u4
        k4u = -mu * u4 - s * h4
        h = h + (dt / 6.0) * (k1h + 2.0 * k2h + 2.0 * k3h + k4h)
        u = u + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    return h, u


@dataclass(frozen=True)
class MomentumRule:
    """Pointwise friction rule mu(s) = 2*sqrt(s) + delta; delta=0 is critical."""

    delta: float = 1e-3

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError(f"delta must be nonnegative, got {self.delta}")

    def mu(self, s):
        return 2.0 * np.sqrt(np.asarray(s, dtype=float)) + self.delta


CRITICAL = MomentumRule(0.0)
DEFAULT_RULE = MomentumRule(1e-3)


@dataclass(frozen=True)
class MomentumSpec:
    """Per-eigendirection friction coefficients for a given spectrum.

    Admissibility (mu_i >= 2*sqrt(s_i)) is checked against the spectrum the
    spec is built from; critical damping is admitted as the smooth d -> 0
    limit of the overdamped solution.
    """

    mu: np.ndarray
    delta: float | None = None

    def __post_init__(self):
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        if np.any(mu <= 0):
            raise ValueError("friction coefficients must be positive")
        object.__setattr__(self, "mu", mu)

    @classmethod
    def from_spectrum(cls, s, delta: float = 1e-3) -> "MomentumSpec":
        rule = MomentumRule(delta)
        return cls(mu=rule.mu(s), delta=delta)

    def check_admissible(self, s) -> None:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if s.shape != self.mu.shape:
            raise ValueError(
                f"spectrum has {s.shape[0]} entries, friction has {self.mu.shape[0]}"
            )
        _discriminant(s, self.mu)


def phi_mgf(s, mu, t):
    """Momentum-flow shrinkage 1 - H(s, t), in [0, 1)."""
    return 1.0 - transfer(s, mu, t)


def phi_ridge(s, lam):
    """Ridge shrinkage s / (s + lambda)."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0):
        raise ValueError("lambda must be positive")
    s = np.asarray(s, dtype=float)
    out = s / (s + lam)
    return float(out) if out.ndim == 0 else out


def phi_gf(s, t):
    """Gradient-flow shrinkage 1 - exp(-s t)."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    out = -np.expm1(-s * t)
    return float(out) if out.ndim == 0 else out


def effective_regularizer(s, mu, t):
    """Quadratic-penalty weight q(s, t) = s H / (1 - H) the flow implicitly applies.

    At time t the flow iterate minimizes the least-squares loss plus this
    per-eigendirection penalty; (t^2/2) * q -> 1 as t -> 0, i.e. the penalty
    approaches ridge with lambda = 2/t^2.  t = 0 (infinite regularization) is
    rejected; use the 2/t^2 calibration directly for the limit.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise ValueError("t must be positive; q diverges as 2/t^2 at t = 0")
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 0):
        raise ValueError("s must be positive")
    H = transfer(s, mu, t)
    out = s_arr * H / (1.0 - H)
    return float(out) if np.ndim(out) == 0 else out


def t_to_lambda(t):
    """Early-stopping time to ridge penalty: lambda = 2 / t^2."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    out = 2.0 / (t * t)
    return float(out) if out.ndim == 0 else out


def lambda_to_t(lam):
    """Ridge penalty to early-stopping time: t = sqrt(2 / lambda)."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0):
        raise ValueError("lambda must be positive")
    out = np.sqrt(2.0 / lam)
    return float(out) if out.ndim == 0 else out


def gf_t_to_lambda(t):
    """Gradient-flow calibration: lambda = 1 / t."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    out = 1.0 / t
    return float(out) if out.ndim == 0 else out
