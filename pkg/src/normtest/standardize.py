"""Empirical standardization of a multivariate sample.

Every statistic in this package is a function of the scaled residuals

    Y_j = S^{-1/2} (X_j - mean),

where S is the sample covariance matrix with divisor ``n`` (not the more
common n-1; the divisor matters for the finite-sample null distributions
tabulated elsewhere in the package) and S^{-1/2} is the unique symmetric
positive definite square root of S^{-1}.  Working on scaled residuals makes
all downstream statistics invariant under full rank affine transformations
of the raw data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SingularCovariance(ValueError):
    """Sample covariance matrix is numerically singular."""


def as_data_matrix(data) -> np.ndarray:
    """Validate and return an (n, d) float matrix of observations.

    Rows are observations.  A 1-D array is treated as a univariate sample.
    Non-finite entries are rejected outright rather than dropped.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise ValueError(f"expected a 1-D or 2-D array of observations, got ndim={x.ndim}")
    if x.shape[0] < 1 or x.shape[1] < 1:
        raise ValueError(f"empty data matrix with shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("data matrix contains non-finite entries")
    return x


def load_csv(path, *, delimiter: str = ",", header: bool = False) -> np.ndarray:
    """Read a numeric CSV file (one observation per row) into a data matrix."""
    x = np.loadtxt(path, delimiter=delimiter, skiprows=1 if header else 0, ndmin=2)
    return as_data_matrix(x)


def sample_mean(data) -> np.ndarray:
    """Column-wise arithmetic mean of the observations."""
    x = as_data_matrix(data)
    return x.mean(axis=0)


def sample_covariance(data) -> np.ndarray:
    """Sample covariance matrix with divisor n: (1/n) sum (X_j - m)(X_j - m)^T."""
    x = as_data_matrix(data)
    n = x.shape[0]
    if n < 2:
        raise ValueError("covariance requires at least two observations")
    xc = x - x.mean(axis=0)
    s = xc.T @ xc / n
    return 0.5 * (s + s.T)


def spd_inverse_sqrt(s, rel_tol: float = 1e-12) -> np.ndarray:
    """Symmetric positive definite inverse square root via eigendecomposition.

    For S = Q diag(w) Q^T returns Q diag(w^{-1/2}) Q^T.  Raises
    :class:`SingularCovariance` when the smallest eigenvalue does not exceed
    ``rel_tol`` times the largest (scale-free singularity threshold).
    """
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.allclose(s, s.T, rtol=0.0, atol=1e-10 * max(1.0, float(np.abs(s).max()))):
        raise ValueError("matrix is not symmetric")
    w, q = np.linalg.eigh(s)
    if w[-1] <= 0.0 or w[0] <= rel_tol * w[-1]:
        raise SingularCovariance(
            f"covariance matrix is numerically singular (eigenvalues in [{w[0]:.3e}, {w[-1]:.3e}])"
        )
    root = (q * w**-0.5) @ q.T
    return 0.5 * (root + root.T)


@dataclass(frozen=True)
class StandardizedSample:
    """Scaled residuals of a sample together with the standardizing pieces.

    Attributes
    ----------
    residuals : (n, d) array
        Y_j = inv_sqrt @ (X_j - mean), one row per observation.
    mean : (d,) array
    covariance : (d, d) array
        Divisor-n sample covariance of the raw data.
    inv_sqrt : (d, d) array
        Symmetric PD inverse square root of ``covariance``.
    """

    residuals: np.ndarray
    mean: np.ndarray
    covariance: np.ndarray
    inv_sqrt: np.ndarray

    @property
    def n(self) -> int:
        return self.residuals.shape[0]

    @property
    def d(self) -> int:
        return self.residuals.shape[1]

    @classmethod
    def from_residuals(cls, residuals) -> "StandardizedSample":
        """Wrap an already standardized residual matrix (used by simulations)."""
        y = as_data_matrix(residuals)
        d = y.shape[1]
        return cls(residuals=y, mean=np.zeros(d), covariance=np.eye(d), inv_sqrt=np.eye(d))


def scaled_residuals(data, rel_tol: float = 1e-12) -> StandardizedSample:
    """Standardize a sample empirically.

    Requires n >= d+1, which makes the covariance invertible almost surely
    for absolutely continuous data.
    """
    x = as_data_matrix(data)
    n, d = x.shape
    if n < d + 1:
        raise ValueError(f"need at least d+1={d + 1} observations, got {n}")
    mean = x.mean(axis=0)
    xc = x - mean
    cov = xc.T @ xc / n
    cov = 0.5 * (cov + cov.T)
    inv_sqrt = spd_inverse_sqrt(cov, rel_tol=rel_tol)
    return StandardizedSample(residuals=xc @ inv_sqrt, mean=mean, covariance=cov, inv_sqrt=inv_sqrt)


def _residual_matrix(x: np.ndarray) -> np.ndarray:
    # Fast path for Monte Carlo loops: no validation, no dataclass.
    xc = x - x.mean(axis=0)
    cov = xc.T @ xc / x.shape[0]
    w, q = np.linalg.eigh(cov)
    if w[0] <= 1e-12 * w[-1]:
        raise SingularCovariance("singular covariance in simulated sample")
    return xc @ ((q * w**-0.5) @ q.T)
