"""One-sided credible/confidence intervals and coverage simulation.

The Gamma constructions coincide exactly (self-conjugation): both reduce
to the Gamma(m*alpha, m) quantile scaled by 1/xbar.  The Gaussian
credible region is a Bregman-divergence ball whose radius comes from a
chi-squared quantile, and it doubles as an exact confidence region.  The
Poisson-exponential credible interval comes from the inverse Gaussian
posterior while the confidence interval inverts the exact sampling
distribution of the sample sum; the two deliberately disagree.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .base import ParamsMixin, check_is_fitted
from .core import ObservationBatch
from .distributions import PoissonExponentialDist
from .errors import DegenerateDataError, DomainError
from .families import (
    GammaFamily,
    GaussianLocationFamily,
    PoissonExponentialFamily,
    gamma_posterior,
    poisson_exponential_posterior,
)
from .numerics import Bracket, find_root, inv_reg_gamma_lower, rng_stream
from .prediction import as_batch
from .validation import check_positive, check_unit_open

__all__ = [
    "METHOD_CREDIBLE",
    "METHOD_CONFIDENCE_PIVOT",
    "METHOD_CONFIDENCE_CDF",
    "METHOD_DIVERGENCE_BALL",
    "IntervalResult",
    "DivergenceBallRegion",
    "CoverageReport",
    "gamma_credible",
    "gamma_confidence",
    "gaussian_divergence_ball",
    "poisson_exp_credible",
    "poisson_exp_confidence",
    "coverage_simulation",
    "GammaRateInterval",
    "PoissonExponentialRateInterval",
    "GaussianDivergenceBall",
]

METHOD_CREDIBLE = "CredibleOneSided"
METHOD_CONFIDENCE_PIVOT = "ConfidencePivot"
METHOD_CONFIDENCE_CDF = "ConfidenceCdfInversion"
METHOD_DIVERGENCE_BALL = "DivergenceBall"


@dataclass(frozen=True)
class IntervalResult:
    """A one-sided interval [lower, upper] for a rate parameter."""

    lower: float
    upper: float
    level: float
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise DomainError(f"interval needs lower <= upper, got {self}")

    def covers(self, value):
        return self.lower <= value <= self.upper

    def covers_natural(self, theta):
        """Containment of the rate beta = -theta."""
        return self.covers(-theta)


@dataclass(frozen=True)
class DivergenceBallRegion:
    """The region {theta : D_A(theta, center) <= radius}."""

    family: GaussianLocationFamily
    center: object
    radius: float
    level: float
    diagnostics: dict = field(default_factory=dict)

    def covers(self, theta):
        return self.family.bregman(theta, self.center) <= self.radius

    def covers_natural(self, theta):
        return self.covers(theta)


def _rate_batch(batch, name):
    xbar = float(batch.xbar)
    if xbar == 0.0:
        raise DegenerateDataError(
            f"{name}: all observations are zero; the rate interval degenerates"
        )
    if xbar < 0:
        raise DomainError(f"{name}: needs xbar > 0, got {xbar}")
    return xbar


def gamma_credible(alpha, batch, level):
    """[0, q] with q the level-quantile of the Gamma(m alpha, m xbar) posterior."""
    check_positive(alpha, "alpha")
    level = check_unit_open(level, "level")
    xbar = _rate_batch(batch, "gamma_credible")
    pivot_quantile = inv_reg_gamma_lower(batch.n * alpha, level) / batch.n
    upper = pivot_quantile / xbar
    post = gamma_posterior(alpha, batch)
    return IntervalResult(
        lower=0.0,
        upper=upper,
        level=level,
        method=METHOD_CREDIBLE,
        diagnostics={"posterior_shape": post.shape, "posterior_rate": post.rate},
    )


def gamma_confidence(alpha, batch, level):
    """Pivot inversion of beta*Xbar ~ Gamma(m alpha, m); same endpoints as credible."""
    credible = gamma_credible(alpha, batch, level)
    return IntervalResult(
        lower=credible.lower,
        upper=credible.upper,
        level=credible.level,
        method=METHOD_CONFIDENCE_PIVOT,
        diagnostics=dict(credible.diagnostics),
    )


def gaussian_divergence_ball(cov, batch, level):
    """Divergence ball of posterior mass ``level`` around the MLE.

    Under the N(xbar, B/n) posterior, 2n D_A(theta, theta_hat) is
    chi-squared with d degrees of freedom, so the radius is that quantile
    over 2n; self-conjugation makes the same ball an exact confidence
    region.
    """
    level = check_unit_open(level, "level")
    family = cov if isinstance(cov, GaussianLocationFamily) else GaussianLocationFamily(cov)
    d = family.d
    chi2_quantile = 2.0 * inv_reg_gamma_lower(d / 2.0, level)
    radius = chi2_quantile / (2.0 * batch.n)
    center = family.mle(batch.xbar)
    return DivergenceBallRegion(
        family=family,
        center=center,
        radius=radius,
        level=level,
        diagnostics={"chi2_quantile": chi2_quantile, "n": batch.n},
    )


def poisson_exp_credible(kappa, batch, level):
    """[0, q] with q the level-quantile of the inverse Gaussian posterior."""
    check_positive(kappa, "kappa")
    level = check_unit_open(level, "level")
    _rate_batch(batch, "poisson_exp_credible")
    post = poisson_exponential_posterior(kappa, batch)
    upper = post.ppf(level)
    return IntervalResult(
        lower=0.0,
        upper=upper,
        level=level,
        method=METHOD_CREDIBLE,
        diagnostics={"posterior_mean": post.mean, "posterior_shape": post.shape},
    )


def poisson_exp_confidence(kappa, batch, level):
    """Exact cdf inversion of the sampling distribution of the sum.

    The sum of m iid Poisson-exponential(kappa, beta) draws is
    Poisson-exponential(m kappa, beta) and its distribution function is
    increasing in beta, so the upper endpoint solves

        P_beta(S <= s_obs) = level,

    the analogue of the Gamma pivot construction (applied to the Gamma
    family this recipe reproduces the pivot endpoints exactly).
    """
    check_positive(kappa, "kappa")
    level = check_unit_open(level, "level")
    xbar = _rate_batch(batch, "poisson_exp_confidence")
    m = batch.n
    s_obs = m * xbar

    def cdf_at(beta):
        return PoissonExponentialDist(m * kappa, beta).cdf(s_obs)

    beta_hat = math.sqrt(kappa / (2.0 * xbar))
    lo = hi = beta_hat
    for _ in range(200):
        lo *= 0.5
        if cdf_at(lo) < level:
            break
    else:
        raise DomainError("could not bracket the confidence endpoint from below")
    for _ in range(200):
        hi *= 2.0
        if cdf_at(hi) > level:
            break
    else:
        raise DomainError("could not bracket the confidence endpoint from above")
    upper = find_root(lambda b: cdf_at(b) - level, Bracket(lo, hi), tol=1e-12)
    return IntervalResult(
        lower=0.0,
        upper=upper,
        level=level,
        method=METHOD_CONFIDENCE_CDF,
        diagnostics={"sum": s_obs, "sum_shape": m * kappa},
    )


@dataclass(frozen=True)
class CoverageReport:
    """Result of a Monte Carlo coverage simulation."""

    trials: int
    hits: int
    empirical_coverage: float
    three_sigma_band: tuple
    level: float
    degenerate: int = 0

    @property
    def within_band(self):
        lo, hi = self.three_sigma_band
        return lo <= self.empirical_coverage <= hi


def coverage_simulation(
    family, interval_fn, theta_true, m, level, trials, seed, n_streams=16
):
    """Simulate datasets, build intervals, count containment of the truth.

    ``interval_fn(batch)`` must return an object with ``covers_natural``.
    Trials whose data are degenerate (the all-atom Poisson-exponential
    sample) are excluded from the coverage denominator and reported.
    Deterministic for a fixed seed; trials are partitioned across
    independent seeded streams and merged in stream order.
    """
    theta_true = family._check_natural(theta_true)
    level = check_unit_open(level, "level")
    trials = int(trials)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    m = int(m)
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    n_streams = min(int(n_streams), trials)
    per = [trials // n_streams] * n_streams
    for i in range(trials % n_streams):
        per[i] += 1
    hits = 0
    degenerate = 0
    for stream_id, chunk in enumerate(per):
        rng = rng_stream(seed, stream_id)
        data = family.sample(rng, theta_true, size=(chunk, m))
        for row in np.asarray(data).reshape(chunk, m):
            if family.d == 1:
                xbar = float(row.mean())
            else:
                xbar = row.mean(axis=0)
            batch = ObservationBatch(n=m, xbar=xbar)
            try:
                result = interval_fn(batch)
            except DegenerateDataError:
                degenerate += 1
                continue
            if result.covers_natural(theta_true):
                hits += 1
    valid = trials - degenerate
    if valid == 0:
        raise DegenerateDataError("every simulated dataset was degenerate")
    coverage = hits / valid
    sigma = math.sqrt(level * (1.0 - level) / valid)
    return CoverageReport(
        trials=valid,
        hits=hits,
        empirical_coverage=coverage,
        three_sigma_band=(level - 3.0 * sigma, level + 3.0 * sigma),
        level=level,
        degenerate=degenerate,
    )


# -- estimator wrappers ------------------------------------------------------


class _IntervalEstimator(ParamsMixin):
    """fit(X) -> interval in ``result_`` with ``lower_``/``upper_`` attributes."""

    def _family(self):
        raise NotImplementedError

    def _build(self, batch):
        raise NotImplementedError

    def fit(self, X):
        family = self._family()
        check_unit_open(self.level, "level")
        batch = as_batch(family, X)
        self.result_ = self._build(batch)
        self.lower_ = self.result_.lower
        self.upper_ = self.result_.upper
        return self

    def covers(self, value):
        check_is_fitted(self, "result_")
        return self.result_.covers(value)


class GammaRateInterval(_IntervalEstimator):
    """One-sided interval for the Gamma rate; credible and confidence coincide."""

    def __init__(self, alpha, level=0.9, method="credible"):
        self.alpha = alpha
        self.level = level
        self.method = method

    def _family(self):
        return GammaFamily(self.alpha)

    def _build(self, batch):
        if self.method == "credible":
            return gamma_credible(self.alpha, batch, self.level)
        if self.method == "confidence":
            return gamma_confidence(self.alpha, batch, self.level)
        raise DomainError(f"unknown method {self.method!r}")


class PoissonExponentialRateInterval(_IntervalEstimator):
    """One-sided interval for the compound-Poisson rate; the two methods differ."""

    def __init__(self, kappa, level=0.9, method="credible"):
        self.kappa = kappa
        self.level = level
        self.method = method

    def _family(self):
        return PoissonExponentialFamily(self.kappa)

    def _build(self, batch):
        if self.method == "credible":
            return poisson_exp_credible(self.kappa, batch, self.level)
        if self.method == "confidence":
            return poisson_exp_confidence(self.kappa, batch, self.level)
        raise DomainError(f"unknown method {self.method!r}")


class GaussianDivergenceBall(ParamsMixin):
    """Divergence-ball credible (= confidence) region for the Gaussian mean."""

    def __init__(self, cov=1.0, level=0.9):
        self.cov = cov
        self.level = level

    def fit(self, X):
        family = GaussianLocationFamily(self.cov)
        check_unit_open(self.level, "level")
        batch = as_batch(family, X)
        self.result_ = gaussian_divergence_ball(family, batch, self.level)
        self.center_ = self.result_.center
        self.radius_ = self.result_.radius
        return self

    def covers(self, theta):
        check_is_fitted(self, "result_")
        return self.result_.covers(theta)
