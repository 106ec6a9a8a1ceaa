"""Reference implementations of competing normality test statistics.

All are affine invariant (the univariate ones location-scale invariant) and
reject for large values; critical values are obtained by the same
parametric Monte Carlo machinery as the main statistic.

Multivariate: the ECF-based statistic here called bhep, the MGF-distance
statistic hjg (smoothing beta > 1), the MGF differential-characterization
statistic hv (gamma > 2) and its skewness-combination limit hv_inf.
Univariate only: the Wasserstein-distance statistic bcmr and the zero-bias
transformation statistic be (fixed tuning; no bootstrap selection).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import ndtr, ndtri

from .standardize import StandardizedSample, as_data_matrix, scaled_residuals
from .statistic import check_tuning, mardia_skewness, mrs_skewness

KINDS = ("bhep", "hjg", "hv", "hv_inf", "bcmr", "be")

# Candidate fixed tuning values for sweeps of the zero-bias statistic.
BE_TUNING_GRID = (0.25, 0.5, 1.0, 2.0, 5.0, 10.0)


@dataclass(frozen=True)
class CompetitorSpec:
    """A competitor statistic plus its tuning constant (where applicable)."""

    kind: str
    tuning: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown competitor {self.kind!r}; choose from {KINDS}")
        if self.kind == "bhep" and not (self.tuning or 1.0) > 0:
            raise ValueError("bhep requires a > 0")
        if self.kind == "hjg" and not (self.tuning or 1.5) > 1.0:
            raise ValueError("hjg requires beta > 1")
        if self.kind == "hv" and not (self.tuning or 5.0) > 2.0:
            raise ValueError("hv requires gamma > 2")
        if self.kind == "be" and not (self.tuning or 1.0) > 0:
            raise ValueError("be requires a > 0")

    def label(self) -> str:
        return self.kind if self.tuning is None else f"{self.kind}:{self.tuning:g}"


_DEFAULT_TUNING = {"bhep": 1.0, "hjg": 1.5, "hv": 5.0, "be": 1.0}


def parse_competitor(text: str) -> CompetitorSpec:
    """Parse strings like ``bhep:0.5``, ``hv:5``, ``hvinf``, ``bcmr``."""
    head, sep, rest = text.strip().lower().partition(":")
    head = {"hvinf": "hv_inf"}.get(head, head)
    tuning = float(rest) if sep and rest else _DEFAULT_TUNING.get(head)
    if head in ("hv_inf", "bcmr"):
        tuning = None
    return CompetitorSpec(kind=head, tuning=tuning)


def bhep(sample: StandardizedSample, a: float) -> float:
    """ECF-based statistic with Gaussian smoothing parameter a > 0."""
    a = check_tuning(a)
    y = sample.residuals
    n, d = y.shape
    r = np.einsum("ij,ij->i", y, y)
    dsq = np.maximum(r[:, None] + r[None, :] - 2.0 * (y @ y.T), 0.0)
    term1 = float(np.mean(np.exp(-0.5 * a * a * dsq)))
    term2 = (
        2.0
        * (1.0 + a * a) ** (-d / 2.0)
        * float(np.mean(np.exp(-0.5 * a * a * r / (1.0 + a * a))))
    )
    term3 = (1.0 + 2.0 * a * a) ** (-d / 2.0)
    return term1 - term2 + term3


def hjg(sample: StandardizedSample, beta: float) -> float:
    """MGF-distance statistic; beta > 1 keeps all three terms finite."""
    if beta <= 1.0:
        raise ValueError("hjg requires beta > 1")
    y = sample.residuals
    n, d = y.shape
    r = np.einsum("ij,ij->i", y, y)
    ssq = r[:, None] + r[None, :] + 2.0 * (y @ y.T)  # ||Y_j + Y_k||^2
    term1 = float(np.sum(np.exp(ssq / (4.0 * beta)))) / (n * beta ** (d / 2.0))
    term2 = 2.0 * (beta - 0.5) ** (-d / 2.0) * float(np.sum(np.exp(r / (4.0 * beta - 2.0))))
    term3 = n * (beta - 1.0) ** (-d / 2.0)
    return term1 - term2 + term3


def hv(sample: StandardizedSample, gamma: float) -> float:
    """MGF differential-characterization statistic; gamma > 2."""
    if gamma <= 2.0:
        raise ValueError("hv requires gamma > 2")
    y = sample.residuals
    n, d = y.shape
    r = np.einsum("ij,ij->i", y, y)
    g = y @ y.T
    ssq = r[:, None] + r[None, :] + 2.0 * g
    inner = g + ssq * (1.0 / (4.0 * gamma * gamma) - 1.0 / (2.0 * gamma)) + d / (2.0 * gamma)
    return (np.pi / gamma) ** (d / 2.0) / n * float(np.sum(np.exp(ssq / (4.0 * gamma)) * inner))


def hv_inf(sample: StandardizedSample) -> float:
    """Skewness combination 2 b_1 + 3 b~_1, the gamma -> infinity limit of hv."""
    return 2.0 * mardia_skewness(sample) + 3.0 * mrs_skewness(sample)


def _phi(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def bcmr(data, *, epsabs: float = 1e-9) -> float:
    """Wasserstein-distance statistic for a raw univariate sample.

    Uses order statistics against the normal quantile function; both
    integrals are evaluated by adaptive quadrature, the second over
    [1/(n+1), n/(n+1)] which keeps its endpoint singularities away.
    """
    x = as_data_matrix(data)
    if x.shape[1] != 1:
        raise ValueError("bcmr is univariate")
    xs = np.sort(x[:, 0])
    n = xs.size
    if n < 2:
        raise ValueError("bcmr requires n >= 2")
    s2 = float(np.var(xs))  # divisor n, matching the residual scaling
    acc = 0.0
    for k in range(1, n + 1):
        val, _ = quad(ndtri, (k - 1) / n, k / n, epsabs=epsabs, limit=200)
        acc += xs[k - 1] * val
    tail, _ = quad(
        lambda t: t * (1.0 - t) / _phi(ndtri(t)) ** 2,
        1.0 / (n + 1),
        n / (n + 1),
        epsabs=epsabs,
        limit=200,
    )
    return n * (1.0 - acc**2 / s2) - tail


def be(sample: StandardizedSample, a: float) -> float:
    """Zero-bias transformation statistic on ordered scaled residuals, d=1.

    The pair sum over j < k factorizes through prefix sums, so the statistic
    costs O(n log n) (the sort dominates).
    """
    a = check_tuning(a)
    if sample.d != 1:
        raise ValueError("be is univariate")
    y = np.sort(sample.residuals[:, 0])
    n = y.size
    ysq = y * y
    c = 1.0 - ndtr(y / math.sqrt(a))
    g = math.sqrt(a / (2.0 * math.pi)) * np.exp(-ysq / (2.0 * a))
    # prefix sums over j < k
    s1 = np.concatenate(([0.0], np.cumsum(ysq - 1.0)))[:-1]
    s2 = np.concatenate(([0.0], np.cumsum(y)))[:-1]
    pair = c * ((ysq - 1.0) * s1 + a * y * s2) + g * (-y * s1 + s2)
    single = c * (ysq * ysq + (a - 2.0) * ysq + 1.0) + g * (2.0 * y - ysq * y)
    return 2.0 / n * float(np.sum(pair)) + float(np.mean(single))


def evaluate(spec: CompetitorSpec, data) -> float:
    """Evaluate a competitor on a raw data matrix (standardizing as needed)."""
    x = as_data_matrix(data)
    if spec.kind == "bcmr":
        return bcmr(x)
    sample = scaled_residuals(x)
    if spec.kind == "bhep":
        return bhep(sample, spec.tuning)
    if spec.kind == "hjg":
        return hjg(sample, spec.tuning)
    if spec.kind == "hv":
        return hv(sample, spec.tuning)
    if spec.kind == "hv_inf":
        return hv_inf(sample)
    if spec.kind == "be":
        return be(sample, spec.tuning)
    raise ValueError(f"unknown competitor {spec.kind!r}")
