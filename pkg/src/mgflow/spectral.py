"""Data matrices, their spectral decompositions, and seeded synthetic sampling.

The whole library works in the scaled SVD convention X = sqrt(n) * U * S^{1/2} * V^T,
so that s_1 >= ... >= s_p > 0 are the eigenvalues of the sample covariance X^T X / n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Smallest admissible s_p relative to s_1; downstream formulas divide by s_i.
RANK_RTOL = 1e-12


class RankError(ValueError):
    """Raised when a data matrix is (numerically) rank deficient."""


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D data matrix, got shape {X.shape}")
    return X


@dataclass(frozen=True)
class Dataset:
    """An n x p design matrix with an optional length-n response.

    The response may be attached later (synthetic generators produce X first
    and the response is sampled separately).
    """

    X: np.ndarray
    y: np.ndarray | None = None

    def __post_init__(self):
        X = _as_matrix(self.X)
        object.__setattr__(self, "X", X)
        n, p = X.shape
        if p > n:
            raise ValueError(f"need p <= n, got n={n}, p={p}")
        if self.y is not None:
            y = np.asarray(self.y, dtype=float)
            if y.shape != (n,):
                raise ValueError(f"response has shape {y.shape}, expected ({n},)")
            object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def with_response(self, y) -> "Dataset":
        return Dataset(self.X, y)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Scaled SVD of a full-column-rank design: X = sqrt(n) U S^{1/2} V^T.

    U is n x p with orthonormal columns, V is p x p orthogonal, and s holds the
    eigenvalues of X^T X / n in non-increasing order (all strictly positive).
    """

    U: np.ndarray
    V: np.ndarray
    s: np.ndarray

    @property
    def n(self) -> int:
        return self.U.shape[0]

    @property
    def p(self) -> int:
        return self.U.shape[1]

    @property
    def s_max(self) -> float:
        return float(self.s[0])

    def reconstruct(self) -> np.ndarray:
        """Rebuild the design matrix sqrt(n) U diag(sqrt(s)) V^T."""
        return np.sqrt(self.n) * (self.U * np.sqrt(self.s)) @ self.V.T


def decompose(dataset: Dataset) -> SpectralDecomposition:
    """Compute the scaled singular value decomposition of the design matrix.

    Raises
    ------
    RankError
        If the smallest eigenvalue of X^T X / n falls below RANK_RTOL times
        the largest one.
    """
    X = dataset.X
    n = dataset.n
    U, sv, Vt = np.linalg.svd(X, full_matrices=False)
    s = sv * sv / n
    if s[0] <= 0.0 or s[-1] < RANK_RTOL * s[0]:
        raise RankError(
            f"rank-deficient design: s_p/s_1 = {s[-1] / s[0] if s[0] > 0 else 0.0:.3e}"
            f" below tolerance {RANK_RTOL:g}"
        )
    return SpectralDecomposition(U=U, V=Vt.T, s=s)


@dataclass(frozen=True)
class PriorSpec:
    """Spherical-prior bookkeeping: signal strength r^2, noise variance sigma^2.

    The signal-to-noise ratio alpha = r^2 n / (sigma^2 p) governs the optimal
    tunings; it is recomputed from the stored fields, never stored separately.
    """

    r2: float
    sigma2: float
    n: int
    p: int

    def __post_init__(self):
        if self.r2 <= 0:
            raise ValueError(f"r2 must be positive, got {self.r2}")
        if self.sigma2 <= 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")
        if self.n < 1 or self.p < 1:
            raise ValueError(f"n and p must be positive, got n={self.n}, p={self.p}")

    @property
    def alpha(self) -> float:
        return self.r2 * self.n / (self.sigma2 * self.p)

    @property
    def noise_scale(self) -> float:
        """The sigma^2 / n prefactor shared by the closed-form risks."""
        return self.sigma2 / self.n


class CovarianceSpec:
    """Feature covariance: either the identity marker or an explicit PSD matrix."""

    _SYM_TOL = 1e-12
    _EIG_FLOOR = -1e-10

    def __init__(self, matrix: np.ndarray | None = None):
        if matrix is not None:
            matrix = np.asarray(matrix, dtype=float)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise ValueError(f"covariance must be square, got shape {matrix.shape}")
            scale = max(1.0, float(np.abs(matrix).max()))
            if np.abs(matrix - matrix.T).max() > self._SYM_TOL * scale:
                raise ValueError("covariance matrix is not symmetric")
            if np.linalg.eigvalsh(matrix).min() < self._EIG_FLOOR * scale:
                raise ValueError("covariance matrix has a negative eigenvalue")
        self.matrix = matrix

    @classmethod
    def identity(cls) -> "CovarianceSpec":
        return cls(None)

    @classmethod
    def explicit(cls, matrix) -> "CovarianceSpec":
        return cls(matrix)

    @property
    def is_identity(self) -> bool:
        return self.matrix is None

    def check_dim(self, p: int) -> None:
        if self.matrix is not None and self.matrix.shape[0] != p:
            raise ValueError(
                f"covariance is {self.matrix.shape[0]} x {self.matrix.shape[0]},"
                f" expected {p} x {p}"
            )

    def matrix_for(self, p: int) -> np.ndarray:
        self.check_dim(p)
        return np.eye(p) if self.matrix is None else self.matrix

    def sqrt_for(self, p: int) -> np.ndarray | None:
        """Matrix square root used by the sampler; None signals the identity.

        Diagonal covariances take the elementwise root so that c*I scales a
        unit-covariance draw by exactly sqrt(c).
        """
        self.check_dim(p)
        if self.matrix is None:
            return None
        off_diag = self.matrix - np.diag(np.diag(self.matrix))
        if not off_diag.any():
            return np.diag(np.sqrt(np.maximum(np.diag(self.matrix), 0.0)))
        w, Q = np.linalg.eigh(self.matrix)
        return (Q * np.sqrt(np.maximum(w, 0.0))) @ Q.T

    def rotated(self, V: np.ndarray) -> np.ndarray | None:
        """V^T Sigma V for out-of-sample risks; None again signals the identity."""
        if self.matrix is None:
            return None
        self.check_dim(V.shape[0])
        return V.T @ self.matrix @ V


def generate_gaussian_data(n: int, p: int, cov: CovarianceSpec, seed: int) -> Dataset:
    """Draw X = Z Sigma^{1/2} with Z of i.i.d. standard normal entries.

    Deterministic in (n, p, cov, seed); the response is not sampled here.
    """
    if not (n >= p >= 1):
        raise ValueError(f"need n >= p >= 1, got n={n}, p={p}")
    cov.check_dim(p)
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, p))
    root = cov.sqrt_for(p)
    X = Z if root is None else Z @ root
    return Dataset(X)


def sample_prior(p: int, r2: float, seed: int) -> np.ndarray:
    """Draw a coefficient vector with i.i.d. N(0, r^2/p) coordinates."""
    if r2 <= 0:
        raise ValueError(f"r2 must be positive, got {r2}")
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, np.sqrt(r2 / p), size=p)


def sample_response(X, beta0, sigma2: float, seed: int) -> np.ndarray:
    """Draw y = X beta0 + sigma * z with z standard normal.

    sigma2 = 0 is accepted (noiseless case, useful in tests); negative values
    are rejected.
    """
    X = _as_matrix(X)
    beta0 = np.asarray(beta0, dtype=float)
    if beta0.shape != (X.shape[1],):
        raise ValueError(f"beta0 has shape {beta0.shape}, expected ({X.shape[1]},)")
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be nonnegative, got {sigma2}")
    mean = X @ beta0
    if sigma2 == 0:
        return mean
    rng = np.random.default_rng(seed)
    return mean + np.sqrt(sigma2) * rng.standard_normal(X.shape[0])
