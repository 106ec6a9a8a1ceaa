"""Inference under fixed alternatives.

T/n estimates the population distance Delta_a = int |Lap CF_X - Lap CF_N|^2 w_a,
which is zero exactly at normality.  sqrt(n) (T/n - Delta_a) is asymptotically
centred normal; this module provides the closed-form variance estimator, the
resulting confidence interval for Delta_a, and the inverse
("equivalence-style") validation test that can certify closeness to normality.

The variance estimator is assembled from closed-form integrals of the
trigonometric sums against the Gaussian weight.  Writing
A_i(Y_k) = int v_i(s, Y_k) z_n(s) w_a(s) ds for the four influence-function
pieces v_1..v_4, the estimator equals (4/n) sum_k (sum_i A_i(Y_k))^2; the
per-pair components sigma^{i,j} = (4/n) sum_k A_i A_j are exposed for
diagnostics.  A direct tensor-grid quadrature of the defining double integral
serves as the independent oracle (d <= 2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import ndtri

from .quadrature import QuadratureSpec, UnsupportedDimension
from .standardize import StandardizedSample
from .statistic import check_tuning


def m_func(t, d: int) -> np.ndarray | float:
    """m(t) = (d - ||t||^2) exp(-||t||^2 / 2), the null mean function."""
    t = np.asarray(t, dtype=float)
    n2 = np.einsum("...i,...i->...", np.atleast_2d(t), np.atleast_2d(t))
    out = (d - n2) * np.exp(-0.5 * n2)
    return float(out[0]) if t.ndim <= 1 else out


def _cs(proj: np.ndarray, sign: int) -> np.ndarray:
    return np.cos(proj) + sign * np.sin(proj)


def z_n(s, sample: StandardizedSample) -> float:
    """Empirical centred projection (1/n) sum_k CS+(s, Y_k) ||Y_k||^2 - m(s)."""
    y = sample.residuals
    s = np.asarray(s, dtype=float).ravel()
    r = np.einsum("ij,ij->i", y, y)
    proj = y @ s
    return float(np.mean(_cs(proj, +1) * r) - m_func(s, sample.d))


@dataclass(frozen=True)
class PsiBundle:
    """The five empirical trigonometric moment sums at one frequency t.

    psi3/psi4 come in +/- (cos+sin / cos-sin) variants.  At t=0 the
    standardization identities force psi1 = 0, psi2 = I and psi3 = d exactly.
    """

    psi1: np.ndarray
    psi2: np.ndarray
    psi3_plus: float
    psi3_minus: float
    psi4_plus: np.ndarray
    psi4_minus: np.ndarray
    psi5: np.ndarray


def psi_estimators(sample: StandardizedSample, t) -> PsiBundle:
    """Evaluate the five moment sums (and sign variants) at frequency t."""
    y = sample.residuals
    t = np.asarray(t, dtype=float).ravel()
    n = sample.n
    r = np.einsum("ij,ij->i", y, y)
    proj = y @ t
    cp, cm = _cs(proj, +1), _cs(proj, -1)
    psi2 = (y.T * cp) @ y / n
    psi5 = (y.T * (cp * r)) @ y / n
    return PsiBundle(
        psi1=(cp @ y) / n,
        psi2=0.5 * (psi2 + psi2.T),
        psi3_plus=float(np.mean(cp * r)),
        psi3_minus=float(np.mean(cm * r)),
        psi4_plus=((cp * r) @ y) / n,
        psi4_minus=((cm * r) @ y) / n,
        psi5=0.5 * (psi5 + psi5.T),
    )


# ---------------------------------------------------------------------------
# Closed-form integrals of the weight against the trigonometric kernels.
# q1/q2 integrate m(t) CS(t,y) (t) w_a(t); p1/p2 integrate CS(t,y) CS(t,z) (t) w_a(t).


def q1(y, a: float) -> float | np.ndarray:
    """int m(t) CS+(t, y) w_a(t) dt."""
    y = np.asarray(y, dtype=float)
    d = y.shape[-1] if y.ndim > 1 else y.size
    r = np.einsum("...i,...i->...", np.atleast_2d(y), np.atleast_2d(y))
    out = (
        (2.0 * np.pi) ** (d / 2.0)
        / (2.0 * a + 1.0) ** (d / 2.0 + 2.0)
        * (r + 2.0 * d * a * (2.0 * a + 1.0))
        * np.exp(-0.5 * r / (2.0 * a + 1.0))
    )
    return float(out[0]) if y.ndim <= 1 else out


def p1(y, z, a: float) -> float:
    """int CS+(t, y) CS+(t, z) w_a(t) dt = (pi/a)^{d/2} exp(-||y-z||^2/(4a))."""
    y = np.asarray(y, dtype=float).ravel()
    z = np.asarray(z, dtype=float).ravel()
    d = y.size
    diff = y - z
    return float((np.pi / a) ** (d / 2.0) * np.exp(-(diff @ diff) / (4.0 * a)))


def p2(y, z, a: float) -> np.ndarray:
    """int CS+(t, y) CS-(t, z) t w_a(t) dt; antisymmetric in (y, z)."""
    y = np.asarray(y, dtype=float).ravel()
    z = np.asarray(z, dtype=float).ravel()
    d = y.size
    diff = y - z
    return (np.pi / a) ** (d / 2.0) / (2.0 * a) * np.exp(-(diff @ diff) / (4.0 * a)) * diff


def q2(y, a: float) -> np.ndarray:
    """int m(t) CS-(t, y) t w_a(t) dt."""
    y = np.asarray(y, dtype=float)
    single = y.ndim <= 1
    y2 = np.atleast_2d(y)
    d = y2.shape[1]
    r = np.einsum("ij,ij->i", y2, y2)
    coef = (
        (2.0 * np.pi) ** (d / 2.0)
        / (2.0 * a + 1.0) ** (d / 2.0 + 3.0)
        * (2.0 * (2.0 * a + 1.0) * (1.0 - a * d) - r)
        * np.exp(-0.5 * r / (2.0 * a + 1.0))
    )
    out = coef[:, None] * y2
    return out[0] if single else out


@dataclass(frozen=True)
class PAggregates:
    """Sample aggregates of the q/p kernels entering the variance estimator.

    Scalars ``p1a1``, ``p2a1``, ``p2a2``; d-vectors ``p1a1_tilde``,
    ``p1a2_tilde``, ``p2a_tilde``; d x d matrix ``p1a_bar``; per-observation
    vectors (length n) ``p1a2_of``, ``p1a3_of``, ``p2a3_of``.
    """

    p1a1: float
    p1a1_tilde: np.ndarray
    p1a2_tilde: np.ndarray
    p2a_tilde: np.ndarray
    p1a_bar: np.ndarray
    p1a2_of: np.ndarray
    p1a3_of: np.ndarray
    p2a3_of: np.ndarray
    p2a1: float
    p2a2: float


def p_aggregates(sample: StandardizedSample, a: float) -> PAggregates:
    """All q/p aggregates in O(n^2 d) via the shared pairwise Gaussian matrix."""
    a = check_tuning(a)
    y = sample.residuals
    n, d = y.shape
    r = np.einsum("ij,ij->i", y, y)
    g = y @ y.T
    e = (2.0 * g - r[:, None] - r[None, :]) / (4.0 * a)
    np.fill_diagonal(e, 0.0)  # exact self-distance
    np.exp(e, out=e)
    cp1 = (np.pi / a) ** (d / 2.0)
    q1v = np.asarray(q1(y, a))
    q2v = np.asarray(q2(y, a))

    # P^{1,a,3}(Y_k) = (1/n) sum_l r_l p1(Y_k, Y_l) - q1(Y_k)
    p13 = cp1 * (e @ r) / n - q1v
    p1a1 = float(np.mean(r * p13))
    p1a1_tilde = (y.T @ (r * p13)) / n
    p1a2_tilde = (y.T @ p13) / n
    p1a_bar = (y.T * (r * p13)) @ y / n
    p12 = (g**2 @ p13) / n

    # w_l = (1/n) sum_m r_m p2(Y_m, Y_l) - q2(Y_l); p2's first argument is the
    # index carrying the r_m weight of the centred projection.
    sum_re_y = ((e * r[:, None]).T @ y) / n
    sum_re = (e @ r) / n
    w = cp1 / (2.0 * a) * (sum_re_y - sum_re[:, None] * y) - q2v
    p2a_tilde = (w.T @ r) / n
    ydotw = np.einsum("ij,ij->i", y, w)
    p2a1 = float(np.mean(r * ydotw))
    cmat = (w.T * r) @ y / n
    p2a3 = np.einsum("kp,pq,kq->k", y, cmat, y)
    p2a2 = float(np.mean(r * np.einsum("ij,ij->i", y @ p1a_bar, w)))

    return PAggregates(
        p1a1=p1a1,
        p1a1_tilde=p1a1_tilde,
        p1a2_tilde=p1a2_tilde,
        p2a_tilde=p2a_tilde,
        p1a_bar=p1a_bar,
        p1a2_of=p12,
        p1a3_of=p13,
        p2a3_of=p2a3,
        p2a1=p2a1,
        p2a2=p2a2,
    )


def sigma_hat_sq_components(sample: StandardizedSample, a: float) -> np.ndarray:
    """Symmetric 4x4 matrix of variance components sigma^{i,j}."""
    y = sample.residuals
    n = sample.n
    r = np.einsum("ij,ij->i", y, y)
    ag = p_aggregates(sample, a)
    vvec = 2.0 * ag.p1a2_tilde + ag.p2a_tilde
    yv = y @ vvec
    s = np.empty((4, 4))
    s[0, 0] = 4.0 * np.mean(r**2 * ag.p1a3_of**2)
    s[0, 1] = 2.0 * ag.p1a1 * ag.p2a1 - 2.0 * ag.p2a2
    s[0, 2] = -4.0 * float(vvec @ ag.p1a1_tilde)
    s[0, 3] = -4.0 * np.mean(r * ag.p1a2_of * ag.p1a3_of)
    s[1, 1] = float(np.mean(ag.p2a3_of**2) - ag.p2a1**2)
    s[1, 2] = 2.0 * np.mean(ag.p2a3_of * yv)
    s[1, 3] = 2.0 * np.mean((ag.p2a3_of - ag.p2a1) * ag.p1a2_of)
    s[2, 2] = 4.0 * float(vvec @ vvec)
    s[2, 3] = 4.0 * np.mean(ag.p1a2_of * yv)
    s[3, 3] = 4.0 * np.mean(ag.p1a2_of**2)
    for i in range(4):
        for j in range(i):
            s[i, j] = s[j, i]
    return s


def sigma_hat_sq(sample: StandardizedSample, a: float) -> float:
    """Consistent estimator of the asymptotic variance of sqrt(n) T/n.

    Negative totals can only arise from roundoff (the estimator is a sum of
    squares in exact arithmetic) and are clipped to zero.
    """
    s = sigma_hat_sq_components(sample, a)
    total = float(np.sum(s))
    return max(total, 0.0)


def _projected_influence(sample: StandardizedSample, a: float, grid: QuadratureSpec) -> np.ndarray:
    """(4, n) matrix of A_i(Y_k) = int v_i(s, Y_k) z_n(s) w_a(s) ds on a grid.

    v_1..v_4 are built from the PsiBundle sums evaluated at the grid nodes;
    the double integral defining each sigma^{i,j} then factorizes through
    these projections, so the cost is one grid pass, not a grid-squared pass.
    """
    y = sample.residuals
    n, d = y.shape
    pts, wt = grid.grid(a, d)
    r = np.einsum("ij,ij->i", y, y)
    g = y @ y.T
    proj = pts @ y.T  # (G, n)
    cp, cm = _cs(proj, +1), _cs(proj, -1)
    t2 = np.einsum("ij,ij->i", pts, pts)
    zg = (cp @ r) / n - (d - t2) * np.exp(-0.5 * t2)

    v1 = cp * r[None, :]
    psi4m = ((cm * r[None, :]) @ y) / n  # (G, d): Psi4-(s_g)
    v2 = -0.5 * (proj * (psi4m @ y.T) - np.einsum("gi,gi->g", pts, psi4m)[:, None])
    psi3m = (cm @ r) / n
    v3 = -(2.0 * (cp @ g) / n + psi3m[:, None] * proj)
    v4 = -(cp @ g**2) / n

    coef = wt * np.exp(-a * t2) * zg
    return np.stack([coef @ v for v in (v1, v2, v3, v4)])


def _variance_grid(sample: StandardizedSample, grid: QuadratureSpec | None) -> QuadratureSpec:
    if sample.d > 2:
        raise UnsupportedDimension(f"variance quadrature oracle supports d <= 2, got d={sample.d}")
    if grid is None:
        grid = QuadratureSpec(points=1200 if sample.d == 1 else 180)
    return grid


def sigma_hat_sq_quadrature(
    sample: StandardizedSample, a: float, grid: QuadratureSpec | None = None
) -> float:
    """Oracle: 4 iint L_n(s,t) z_n(s) z_n(t) w_a(s) w_a(t) ds dt, d <= 2."""
    a = check_tuning(a)
    amat = _projected_influence(sample, a, _variance_grid(sample, grid))
    total = amat.sum(axis=0)
    return 4.0 * float(np.mean(total * total))


def sigma_hat_sq_components_quadrature(
    sample: StandardizedSample, a: float, grid: QuadratureSpec | None = None
) -> np.ndarray:
    """Per-(i,j) quadrature components, for diagnosis against the closed form."""
    a = check_tuning(a)
    amat = _projected_influence(sample, a, _variance_grid(sample, grid))
    return 4.0 * (amat @ amat.T) / sample.n


@dataclass(frozen=True)
class DeltaEstimate:
    """Point estimate T/n of the normality distance with its standard error."""

    delta_hat: float
    sigma_hat: float
    n: int
    d: int
    a: float
    clipped: bool = False

    def to_dict(self) -> dict:
        return {
            "delta_hat": self.delta_hat,
            "sigma_hat": self.sigma_hat,
            "n": self.n,
            "d": self.d,
            "a": self.a,
            "clipped": self.clipped,
        }


def delta_estimate(sample: StandardizedSample, a: float) -> DeltaEstimate:
    """Estimate Delta_a by T/n together with the closed-form sigma estimate."""
    from .statistic import t_statistic

    a = check_tuning(a)
    stat = t_statistic(sample, a)
    raw = float(np.sum(sigma_hat_sq_components(sample, a)))
    return DeltaEstimate(
        delta_hat=stat.value / sample.n,
        sigma_hat=float(np.sqrt(max(raw, 0.0))),
        n=sample.n,
        d=sample.d,
        a=a,
        clipped=raw < 0.0,
    )


@dataclass(frozen=True)
class ConfidenceInterval:
    """Two-sided asymptotic interval [T/n -+ z_{1-alpha/2} sigma_hat/sqrt(n)]."""

    lower: float
    upper: float
    alpha: float

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "alpha": self.alpha}


def confidence_interval(est: DeltaEstimate, alpha: float) -> ConfidenceInterval:
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    half = float(ndtri(1.0 - alpha / 2.0)) * est.sigma_hat / np.sqrt(est.n)
    return ConfidenceInterval(lower=est.delta_hat - half, upper=est.delta_hat + half, alpha=alpha)


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of the neighborhood-of-model validation test.

    ``reject`` rejects the hypothesis "distance >= delta0" -- i.e. a rejection
    is positive evidence that the distribution lies within delta0 of
    normality.
    """

    reject: bool
    threshold: float
    delta0: float
    alpha: float

    def to_dict(self) -> dict:
        return {
            "reject": self.reject,
            "threshold": self.threshold,
            "delta0": self.delta0,
            "alpha": self.alpha,
        }


def validation_test(est: DeltaEstimate, delta0: float, alpha: float) -> ValidationResult:
    """Reject H: Delta_a >= delta0 iff T/n <= delta0 - (sigma/sqrt n) z_{1-alpha}."""
    if delta0 <= 0.0:
        raise ValueError("delta0 must be positive")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    threshold = delta0 - est.sigma_hat / np.sqrt(est.n) * float(ndtri(1.0 - alpha))
    return ValidationResult(
        reject=bool(est.delta_hat <= threshold), threshold=float(threshold), delta0=delta0, alpha=alpha
    )


def delta_a_univariate(cf_second_derivative, a: float, limit: int = 400) -> float:
    """Population distance for d=1 from the CF second derivative.

    Integrates (phi''(t) - (t^2 - 1) e^{-t^2/2})^2 e^{-a t^2} over the line
    with adaptive quadrature.
    """
    a = check_tuning(a)

    def integrand(t: float) -> float:
        return (cf_second_derivative(t) - (t * t - 1.0) * np.exp(-0.5 * t * t)) ** 2 * np.exp(
            -a * t * t
        )

    val, err = quad(integrand, -np.inf, np.inf, limit=limit)
    if not np.isfinite(val):
        raise ValueError("quadrature failed; is the CF second derivative integrable?")
    return float(val)


# Characteristic-function second derivatives for the standardized reference
# alternatives (unit variance): uniform on (-sqrt3, sqrt3), Laplace with scale
# 1/sqrt2, logistic with scale sqrt3/pi.


def uniform_cf_second_derivative(t: float) -> float:
    t = float(t)
    s3 = np.sqrt(3.0)
    if abs(t) < 1e-4:
        # series of (sin u)/u at u = sqrt(3) t, differentiated twice in t
        return -1.0 + 0.9 * t * t
    u = s3 * t
    return (s3 * (2.0 - 3.0 * t * t) * np.sin(u) - 6.0 * t * np.cos(u)) / (3.0 * t**3)


def laplace_cf_second_derivative(t: float) -> float:
    t = float(t)
    return (12.0 * t * t - 8.0) / (2.0 + t * t) ** 3


def logistic_cf_second_derivative(t: float) -> float:
    # Exponentially rescaled form of
    # 1.5 (3u - 2 sinh 2u + u cosh 2u) / sinh(u)^3, u = sqrt(3)|t|,
    # stable for large |t| where the direct evaluation overflows.
    u = np.sqrt(3.0) * abs(float(t))
    if u < 1e-3:
        return -1.0 + 0.7 * u * u
    em1, em3, em5 = np.exp(-u), np.exp(-3.0 * u), np.exp(-5.0 * u)
    num = 12.0 * (3.0 * u * em3 - em1 + em5 + 0.5 * u * (em1 + em5))
    return num / (1.0 - np.exp(-2.0 * u)) ** 3


def report_json(est: DeltaEstimate, ci: ConfidenceInterval | None = None) -> str:
    obj = {"estimate": est.to_dict()}
    if ci is not None:
        obj["confidence_interval"] = ci.to_dict()
    return json.dumps(obj, indent=2, sort_keys=True)
