"""Null distribution services for the scaled test statistic.

Monte Carlo critical values and p-values are exact parametric simulations:
affine invariance makes the null distribution parameter free, so sampling
from the standard normal suffices.  The large-sample regime is served by the
covariance kernel K of the limiting Gaussian process, a sampler for the
limiting distribution at finitely many random support points, and the closed
form of the limit mean E(T_inf).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import parallel
from .standardize import _residual_matrix
from .statistic import StatisticValue, _scaled_t, check_tuning, scaling_factor


class KernelNotPSD(ValueError):
    """Kernel matrix is indefinite beyond what roundoff repair can explain."""


def _h_func(x: np.ndarray, t: np.ndarray) -> np.ndarray:
    # Influence function of the limiting process under the null: the
    # projection of one standardized observation onto frequency t.  Used only
    # to cross-check the kernel by simulation.
    x = np.atleast_2d(x)
    d = x.shape[1]
    t = np.asarray(t, dtype=float)
    nx = np.einsum("ij,ij->i", x, x)
    tx = x @ t
    nt = float(t @ t)
    pt = math.exp(-0.5 * nt)
    mt = (d - nt) * pt
    cs = np.cos(tx) + np.sin(tx)
    return (
        nx * cs
        - (2.0 * pt + mt) * tx
        - pt * nx
        + (2.0 * pt + 0.5 * mt) * tx**2
        - (pt + 0.5 * mt) * nt
    )


def kernel_K(s, t, d: int | None = None) -> float:
    """Covariance kernel K(s, t) of the limiting Gaussian process under H0."""
    s = np.asarray(s, dtype=float).ravel()
    t = np.asarray(t, dtype=float).ravel()
    if d is None:
        d = s.size
    if s.size != d or t.size != d:
        raise ValueError("s and t must be d-vectors")
    return float(_kernel_matrix(np.vstack([s, t]), d)[0, 1])


def _kernel_matrix(u: np.ndarray, d: int) -> np.ndarray:
    """K evaluated on all pairs of rows of u, vectorized."""
    ns = np.einsum("ij,ij->i", u, u)
    g = u @ u.T
    d2, d4 = d + 2.0, d + 4.0
    dsq = np.maximum(ns[:, None] + ns[None, :] - 2.0 * g, 0.0)
    part1 = np.exp(-0.5 * dsq) * ((dsq - d2) ** 2 - 2.0 * d2)
    brace = (
        -0.5 * g**2 * (ns[:, None] - d4) * (ns[None, :] - d4)
        + 2.0 * d2 * (ns[:, None] + ns[None, :])
        - ns[:, None] ** 2
        - ns[None, :] ** 2
        - ns[:, None] * ns[None, :]
        - g * (ns[:, None] - d2) * (ns[None, :] - d2)
        - d * d2
    )
    psi = np.exp(-0.5 * ns)
    return part1 + np.outer(psi, psi) * brace


def expected_limit(d: int, a: float) -> float:
    """Mean of the limiting null distribution of the raw statistic.

    Closed form obtained by integrating K(t, t) w_a(t) over R^d; the c_j
    coefficients are the radial Gaussian moments of that integrand.  Checked
    in the tests against direct quadrature of K(t, t) w_a and against the
    empirical mean of the simulated null statistic at large n.
    """
    a = check_tuning(a)
    d = int(d)

    def c(j: int) -> float:
        return np.pi ** (d / 2.0) * d / (a + 1.0) ** (d / 2.0 + j)

    return float(
        d * (d + 2.0) * ((np.pi / a) ** (d / 2.0) - (np.pi / (a + 1.0)) ** (d / 2.0))
        - c(4) * (d + 2.0) * (d + 4.0) * (d + 6.0) / 32.0
        + c(3) * (d + 2.0) * (d + 3.0) * (d + 4.0) / 8.0
        - c(2) * (d + 2.0) * (d**2 + 4.0 * d + 14.0) / 8.0
        + c(1) * (2.0 - d) * (d + 2.0) / 2.0
    )


def _null_replication(rng: np.random.Generator, d: int, n: int, a: float) -> float:
    y = _residual_matrix(rng.standard_normal((n, d)))
    return _scaled_t(y, a)


def mc_null_sample(
    d: int,
    n: int,
    a: float,
    replications: int,
    seed: int,
    *,
    workers: int | None = 1,
    checkpoint: str | None = None,
    progress: bool = False,
) -> np.ndarray:
    """Simulate the scaled statistic under H0; returns the sorted sample.

    Deterministic given ``seed``: replication i uses the substream derived
    from (seed, i), so values do not depend on the worker count.
    """
    a = check_tuning(a)
    if n < d + 1:
        raise ValueError(f"need n >= d+1, got n={n}, d={d}")
    meta = f"null d={d} n={n} a={a!r} R={replications} seed={seed}"
    vals = parallel.map_replications(
        _null_replication,
        replications,
        seed,
        args=(d, n, a),
        workers=workers,
        checkpoint=checkpoint,
        checkpoint_meta=meta,
        progress=progress,
    )
    return np.sort(vals)


def critical_value(samples, alpha: float) -> float:
    """Empirical (1-alpha) quantile: the ceil((1-alpha) N)-th order statistic."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("empty sample")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    x = np.sort(x)
    k = math.ceil((1.0 - alpha) * x.size)
    return float(x[max(k, 1) - 1])


def pvalue_mc(
    observed: StatisticValue | float,
    d: int,
    n: int,
    a: float,
    replications: int,
    seed: int,
    *,
    workers: int | None = 1,
    progress: bool = False,
) -> float:
    """Monte Carlo p-value (1 + #{replicates >= observed}) / (R + 1).

    ``observed`` is compared on the scaled statistic.
    """
    obs = observed.scaled if isinstance(observed, StatisticValue) else float(observed)
    vals = mc_null_sample(d, n, a, replications, seed, workers=workers, progress=progress)
    count = int(np.sum(vals >= obs))
    return (1.0 + count) / (replications + 1.0)


@dataclass(frozen=True)
class LimitSamplerConfig:
    """Support-point and replicate counts for the limit-quantile sampler."""

    m: int = 1000
    ell: int = 100_000
    seed: int = 0
    jitter: float = 1e-10

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("need at least m=2 support points")
        if self.ell < 1:
            raise ValueError("need at least one replicate")
        if self.jitter < 0.0:
            raise ValueError("jitter must be nonnegative")


def limit_quantile(
    d: int,
    a: float,
    alpha: float,
    config: LimitSamplerConfig,
    *,
    support_points=None,
) -> float:
    """Approximate the (1-alpha) quantile of the scaled limiting statistic.

    Draws m support points U_k ~ N_d(0, (2a)^{-1} I) matched to the weight
    w_a, forms the kernel matrix K(U_i, U_j), then simulates ell replicates
    X ~ N_m(0, Sigma_K) and returns the empirical quantile of
    ||X||^2 / (d^2 m).  The normalization is the importance-sampling identity
    int z^2 w_a = (pi/a)^{d/2} E[z(U)^2] combined with the table scaling.

    ``support_points`` overrides the random U draw (diagnostics only); its
    row count must equal ``config.m``.
    """
    a = check_tuning(a)
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=config.seed))
    if support_points is None:
        u = rng.normal(scale=np.sqrt(0.5 / a), size=(config.m, d))
    else:
        u = np.asarray(support_points, dtype=float).reshape(config.m, d)
    sk = _kernel_matrix(u, d)
    sk = 0.5 * (sk + sk.T)
    if config.jitter > 0.0:
        sk[np.diag_indices_from(sk)] += config.jitter * np.trace(sk) / config.m
    w, q = np.linalg.eigh(sk)
    scale = max(float(w[-1]), 1.0)
    if w[0] < -1e-8 * scale:
        raise KernelNotPSD(f"kernel matrix eigenvalue {w[0]:.3e} below -1e-8 * scale")
    factor = q * np.sqrt(np.clip(w, 0.0, None))  # factor @ factor.T == sk after clipping
    norm = 1.0 / (d**2 * config.m)
    zs = np.empty(config.ell)
    chunk = max(1, min(config.ell, 2**24 // config.m))
    for lo in range(0, config.ell, chunk):
        hi = min(lo + chunk, config.ell)
        g = rng.standard_normal((hi - lo, config.m))
        x = g @ factor.T
        zs[lo:hi] = np.einsum("ij,ij->i", x, x) * norm
    return critical_value(zs, alpha)


@dataclass
class CriticalValueTable:
    """Quantiles of the scaled statistic, keyed by (d, n, a, alpha).

    ``n`` is an int for finite-sample entries and ``math.inf`` for entries
    produced by the limit sampler.
    """

    entries: dict[tuple[int, float, float, float], float] = field(default_factory=dict)
    replications: int = 0
    seed: int = 0

    @staticmethod
    def _key(d: int, n: float, a: float, alpha: float) -> tuple[int, float, float, float]:
        return (int(d), float(n), float(a), float(alpha))

    def add(self, d: int, n: float, a: float, alpha: float, quantile: float) -> None:
        self.entries[self._key(d, n, a, alpha)] = float(quantile)

    def lookup(self, d: int, n: float, a: float, alpha: float) -> float:
        return self.entries[self._key(d, n, a, alpha)]

    def rows(self) -> list[dict]:
        out = []
        for (d, n, a, alpha), q in sorted(self.entries.items()):
            out.append(
                {
                    "d": d,
                    "n": "inf" if math.isinf(n) else int(n),
                    "a": a,
                    "alpha": alpha,
                    "quantile": q,
                    "replications": self.replications,
                    "seed": self.seed,
                }
            )
        return out

    def to_json(self) -> str:
        return json.dumps(
            {"replications": self.replications, "seed": self.seed, "entries": self.rows()},
            indent=2,
            sort_keys=True,
        )

    def to_csv(self) -> str:
        lines = ["d,n,a,alpha,quantile,replications,seed"]
        for row in self.rows():
            lines.append(
                f"{row['d']},{row['n']},{row['a']!r},{row['alpha']!r},"
                f"{row['quantile']!r},{row['replications']},{row['seed']}"
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CriticalValueTable":
        obj = json.loads(text)
        table = cls(replications=int(obj["replications"]), seed=int(obj["seed"]))
        for row in obj["entries"]:
            n = math.inf if row["n"] == "inf" else float(row["n"])
            table.add(int(row["d"]), n, float(row["a"]), float(row["alpha"]), float(row["quantile"]))
        return table
