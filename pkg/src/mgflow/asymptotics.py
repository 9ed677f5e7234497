"""Marchenko-Pastur limit law (unit scale) and the limiting Bayes risks.

Only the identity feature covariance is implemented, so the limiting spectral
law depends on the aspect ratio gamma = p/n alone: density
sqrt((b - s)(s - a)) / (2 pi gamma s) on [a, b] with a = (1 - sqrt(gamma))^2,
b = (1 + sqrt(gamma))^2, plus a point mass 1 - 1/gamma at the origin when
gamma > 1.

Integrals against the law use Gauss-Legendre after the substitution
s = a + (b - a) sin^2(theta), which absorbs the square-root vanishing of the
density at both edges and leaves a smooth integrand on [0, pi/2].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .shrinkage import DEFAULT_RULE, MomentumRule, transfer

DEFAULT_NODES = 400


@lru_cache(maxsize=8)
def _gauss_nodes(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class MPLaw:
    """Support edges and point mass of the limiting spectral law."""

    gamma: float

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")

    @property
    def a(self) -> float:
        return (1.0 - np.sqrt(self.gamma)) ** 2

    @property
    def b(self) -> float:
        return (1.0 + np.sqrt(self.gamma)) ** 2

    @property
    def point_mass_at_zero(self) -> float:
        return max(0.0, 1.0 - 1.0 / self.gamma)

    def total_mass(self, nodes: int = DEFAULT_NODES) -> float:
        """Density integral plus point mass; a quadrature self-test (== 1)."""
        return mp_integrate(lambda s: np.ones_like(s), self.gamma, nodes)


@dataclass(frozen=True)
class AsymptoticPrior:
    """Limit-scale prior: alpha0 = r^2 / (sigma^2 gamma) and noise variance."""

    alpha0: float
    sigma2: float

    def __post_init__(self):
        if self.alpha0 <= 0 or self.sigma2 <= 0:
            raise ValueError("alpha0 and sigma2 must be positive")

    @classmethod
    def from_signal(cls, r2: float, sigma2: float, gamma: float) -> "AsymptoticPrior":
        return cls(alpha0=r2 / (sigma2 * gamma), sigma2=sigma2)

    def r2(self, gamma: float) -> float:
        return self.alpha0 * self.sigma2 * gamma


def mp_density(s, gamma: float):
    """Density of the limiting spectral law; zero outside the support."""
    law = MPLaw(gamma)
    s = np.asarray(s, dtype=float)
    scalar = s.ndim == 0
    s = np.atleast_1d(s)
    out = np.zeros_like(s)
    inside = (s > law.a) & (s < law.b)
    si = s[inside]
    out[inside] = np.sqrt((law.b - si) * (si - law.a)) / (2.0 * np.pi * gamma * si)
    return float(out[0]) if scalar else out


def mp_integrate(f, gamma: float, nodes: int = DEFAULT_NODES) -> float:
    """Integral of f against the limiting spectral law (point mass included).

    f must accept a float array and be finite on the open support; when
    gamma > 1 it is also evaluated at 0.0 for the point-mass contribution, so
    it must return the s -> 0+ limit there.
    """
    law = MPLaw(gamma)
    if nodes < 1:
        raise ValueError(f"nodes must be positive, got {nodes}")
    x, w = _gauss_nodes(int(nodes))
    theta = 0.25 * np.pi * (x + 1.0)
    s = law.a + (law.b - law.a) * np.sin(theta) ** 2
    sc = np.sin(theta) * np.cos(theta)
    weight = (law.b - law.a) ** 2 / (np.pi * gamma) * sc * sc / s
    fs = np.asarray(f(s), dtype=float)
    if not np.all(np.isfinite(fs)):
        raise ValueError("integrand is not finite at a quadrature node")
    total = float(np.sum(fs * weight * w) * 0.25 * np.pi)
    pm = law.point_mass_at_zero
    if pm > 0.0:
        f0 = float(np.asarray(f(np.zeros(1)), dtype=float)[0])
        if not np.isfinite(f0):
            raise ValueError("integrand has no finite limit at s = 0")
        total += pm * f0
    return total


def _safe_over_s(numer, s):
    """numer / s with the s = 0 entries replaced by their zero limit."""
    out = np.zeros_like(numer)
    np.divide(numer, s, out=out, where=s > 0)
    return out


def limiting_bayes_risk_mgf(gamma: float, prior: AsymptoticPrior,
                            rule: MomentumRule = DEFAULT_RULE, t: float = 0.0,
                            nodes: int = DEFAULT_NODES) -> float:
    """Limiting Bayes estimation risk of the flow:
    sigma^2 gamma * Int [alpha0 H^2(s,t) + (1-H)^2 / s] dF.

    At s -> 0 the integrand tends to alpha0 (H(0, t) = 1), so the gamma > 1
    point mass contributes r^2 (1 - 1/gamma).
    """
    if t < 0:
        raise ValueError("t must be nonnegative")

    def integrand(s):
        H = transfer(s, rule.mu(s), t)
        return prior.alpha0 * H * H + _safe_over_s((1.0 - H) ** 2, s)

    return prior.sigma2 * gamma * mp_integrate(integrand, gamma, nodes)


def limiting_bayes_risk_ridge(gamma: float, prior: AsymptoticPrior, lam: float,
                              nodes: int = DEFAULT_NODES) -> float:
    """Limiting Bayes estimation risk of ridge:
    sigma^2 gamma * Int (alpha0 lambda^2 + s) / (s + lambda)^2 dF.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")

    def integrand(s):
        return (prior.alpha0 * lam * lam + s) / (s + lam) ** 2

    return prior.sigma2 * gamma * mp_integrate(integrand, gamma, nodes)


def limiting_bayes_insample_mgf(gamma: float, prior: AsymptoticPrior,
                                rule: MomentumRule = DEFAULT_RULE, t: float = 0.0,
                                nodes: int = DEFAULT_NODES) -> float:
    """Limiting Bayes in-sample risk: the estimation integrand weighted by s.

    The integrand vanishes at s = 0, so the point mass never contributes.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")

    def integrand(s):
        H = transfer(s, rule.mu(s), t)
        return prior.alpha0 * s * H * H + (1.0 - H) ** 2

    return prior.sigma2 * gamma * mp_integrate(integrand, gamma, nodes)


def limiting_bayes_insample_ridge(gamma: float, prior: AsymptoticPrior, lam: float,
                                  nodes: int = DEFAULT_NODES) -> float:
    """Limiting Bayes in-sample risk of ridge (s-weighted integrand)."""
    if lam <= 0:
        raise ValueError("lambda must be positive")

    def integrand(s):
        return s * (prior.alpha0 * lam * lam + s) / (s + lam) ** 2

    return prior.sigma2 * gamma * mp_integrate(integrand, gamma, nodes)
