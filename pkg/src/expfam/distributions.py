"""Concrete distributions used for posteriors and sampling.

The compound-Poisson density series is evaluated here in log space.  For a
Poisson number N of exponential summands, the continuous part of the
density of Y = X_1 + ... + X_N factors as

    f(x) = exp(-beta*x - kappa/(2*beta)) * S(kappa, x),
    S(kappa, x) = sum_{k>=1} (kappa/2)^k x^(k-1) / (k! (k-1)!),

with a point mass exp(-kappa/(2*beta)) at zero; kappa = 2*lambda*beta ties
the Poisson rate lambda to the family's shape parameter.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _scisp

from .errors import NonConvergenceError, SupportError
from .numerics import Bracket, find_root, log_std_normal_cdf, std_normal_cdf
from .validation import check_nonnegative, check_positive, check_unit_open

__all__ = [
    "GammaPosterior",
    "InverseGaussianDist",
    "PoissonExponentialDist",
    "pe_log_series_factor",
]


@dataclass(frozen=True)
class GammaPosterior:
    """Gamma distribution in shape/rate form."""

    shape: float
    rate: float

    def __post_init__(self):
        check_positive(self.shape, "shape")
        check_positive(self.rate, "rate")

    def log_pdf(self, x):
        if x <= 0:
            raise SupportError(f"gamma support is x > 0, got {x}")
        a, b = self.shape, self.rate
        return a * math.log(b) + (a - 1.0) * math.log(x) - b * x - math.lgamma(a)

    def pdf(self, x):
        return math.exp(self.log_pdf(x))

    def cdf(self, x):
        if x < 0:
            return 0.0
        return float(_scisp.gammainc(self.shape, self.rate * x))

    def ppf(self, p):
        p = check_unit_open(p, "p")
        return float(_scisp.gammaincinv(self.shape, p)) / self.rate

    @property
    def mean(self):
        return self.shape / self.rate

    @property
    def variance(self):
        return self.shape / self.rate**2


@dataclass(frozen=True)
class InverseGaussianDist:
    """Inverse Gaussian with mean ``mean`` and shape ``shape``."""

    mean: float
    shape: float

    def __post_init__(self):
        check_positive(self.mean, "mean")
        check_positive(self.shape, "shape")

    def log_pdf(self, x):
        if x <= 0:
            raise SupportError(f"inverse Gaussian support is x > 0, got {x}")
        m, lam = self.mean, self.shape
        tau = 2.0 * math.pi
        return 0.5 * (math.log(lam) - math.log(tau) - 3.0 * math.log(x)) - lam * (
            x - m
        ) ** 2 / (2.0 * m * m * x)

    def pdf(self, x):
        return math.exp(self.log_pdf(x))

    def cdf(self, x):
        """Two-term standard-normal composition, stable for large shapes."""
        x = float(x)
        if x <= 0:
            return 0.0
        m, lam = self.mean, self.shape
        s = math.sqrt(lam / x)
        first = std_normal_cdf(s * (x / m - 1.0))
        second = math.exp(2.0 * lam / m + log_std_normal_cdf(-s * (x / m + 1.0)))
        return min(first + second, 1.0)

    def ppf(self, p):
        p = check_unit_open(p, "p")
        lo, hi = self.mean, self.mean
        for _ in range(200):
            lo *= 0.5
            if self.cdf(lo) < p:
                break
        else:
            raise NonConvergenceError("could not bracket inverse Gaussian quantile")
        for _ in range(200):
            hi *= 2.0
            if self.cdf(hi) > p:
                break
        else:
            raise NonConvergenceError("could not bracket inverse Gaussian quantile")
        return find_root(lambda x: self.cdf(x) - p, Bracket(lo, hi), tol=1e-13)

    def sample(self, rng, size):
        return rng.wald(self.mean, self.shape, size=size)


def pe_log_series_factor(kappa, x):
    """log S(kappa, x) for the compound-Poisson series factor, x > 0.

    Terms are summed in log space around the peak index k ~ sqrt(kappa*x/2)
    with enough slack that the neglected tail is below 1e-16 relative.
    """
    kappa = check_positive(kappa, "kappa")
    x = float(x)
    if x <= 0:
        raise SupportError(f"series factor needs x > 0, got {x}")
    z = kappa / 2.0
    w = z * x
    n_terms = int(max(12.0, math.sqrt(w) + 12.0 * w**0.25 + 25.0))
    k = np.arange(1, n_terms + 1, dtype=float)
    log_terms = (
        k * math.log(z)
        + (k - 1.0) * math.log(x)
        - _scisp.gammaln(k + 1.0)
        - _scisp.gammaln(k)
    )
    out = float(_scisp.logsumexp(log_terms))
    if log_terms[-1] > out - 40.0:  # tail not yet negligible
        raise NonConvergenceError(
            f"series truncation too short at kappa={kappa}, x={x}"
        )
    return out


@dataclass(frozen=True)
class PoissonExponentialDist:
    """Compound Poisson of exponentials: shape ``kappa``, rate ``rate``."""

    kappa: float
    rate: float

    def __post_init__(self):
        check_positive(self.kappa, "kappa")
        check_positive(self.rate, "rate")

    @property
    def poisson_rate(self):
        return self.kappa / (2.0 * self.rate)

    @property
    def atom_weight(self):
        return math.exp(-self.poisson_rate)

    def log_density(self, x):
        """Log of the continuous density at x > 0."""
        x = float(x)
        if x <= 0:
            raise SupportError(f"continuous part lives on x > 0, got {x}")
        return -self.rate * x - self.poisson_rate + pe_log_series_factor(self.kappa, x)

    def density(self, x):
        return math.exp(self.log_density(x))

    def cdf(self, x):
        """Atom plus Poisson-weighted gamma distribution functions."""
        x = check_nonnegative(x, "x")
        lam = self.poisson_rate
        out = math.exp(-lam)
        if x == 0.0:
            return out
        if lam <= 30.0:
            k_lo, k_hi = 1, int(lam + 45)
        else:
            half = 12.0 * math.sqrt(lam) + 30.0
            k_lo = max(1, int(lam - half))
            k_hi = int(lam + half)
        k = np.arange(k_lo, k_hi + 1, dtype=float)
        log_w = -lam + k * math.log(lam) - _scisp.gammaln(k + 1.0)
        out += float(np.sum(np.exp(log_w) * _scisp.gammainc(k, self.rate * x)))
        return min(out, 1.0)

    def sample(self, rng, size):
        counts = rng.poisson(self.poisson_rate, size=size)
        return rng.gamma(shape=counts, scale=1.0 / self.rate)

    @property
    def mean(self):
        return self.kappa / (2.0 * self.rate**2)
