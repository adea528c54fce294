"""The four concrete families and the conjugation map between them.

Closed forms implemented here, with theta the natural parameter:

===================  ==========================  =====================
family               cumulant A(theta)           natural domain
===================  ==========================  =====================
Gamma(alpha)         -alpha*ln(-theta)           theta < 0
Gaussian location    theta.B.theta / 2           R^d
inverse Gaussian     -sqrt(-2*kappa*theta)       theta < 0
Poisson-exponential  kappa / (2*(-theta))        theta < 0
===================  ==========================  =====================

The inverse Gaussian cumulant carries the sign that makes it convex on the
negative half line; its gradient sqrt(kappa/(-2*theta)) is then the
distribution's mean and its conjugate is kappa/(2*x), which pins the
orientation down uniquely.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import Family, REAL_LINE, TAU
from .distributions import (
    GammaPosterior,
    InverseGaussianDist,
    PoissonExponentialDist,
    pe_log_series_factor,
)
from .errors import DomainError, SupportError
from .validation import check_positive

__all__ = [
    "GammaFamily",
    "GaussianLocationFamily",
    "InverseGaussianFamily",
    "PoissonExponentialFamily",
    "ConjugatePair",
    "conjugate_family",
    "gamma_density",
    "gamma_posterior",
    "poisson_exponential_posterior",
    "tweedie_variance_function",
    "self_conjugacy_defect",
]


class GammaFamily(Family):
    """Gamma with fixed shape ``alpha``; the rate beta = -theta varies."""

    def __init__(self, alpha):
        self.alpha = alpha
        check_positive(alpha, "alpha")

    def in_natural_domain(self, theta):
        return np.isfinite(theta) and theta < 0

    def in_mean_domain(self, mu):
        return np.isfinite(mu) and mu > 0

    def in_support(self, x):
        return np.isfinite(x) and x > 0

    def cumulant(self, theta):
        theta = self._check_natural(theta)
        return -self.alpha * math.log(-theta)

    def mean_from_natural(self, theta):
        theta = self._check_natural(theta)
        return -self.alpha / theta

    def covariance(self, theta):
        theta = self._check_natural(theta)
        return self.alpha / theta**2

    def mle(self, xbar):
        xbar = self._check_mean(xbar)
        return -self.alpha / xbar

    def log_carrier(self, x):
        x = self._check_support(x)
        return (self.alpha - 1.0) * math.log(x) - math.lgamma(self.alpha)

    def log_jeffreys(self, theta):
        theta = self._check_natural(theta)
        return 0.5 * math.log(self.alpha) - math.log(-theta)

    def convolution_family(self, k):
        return GammaFamily(int(k) * self.alpha)

    def sample(self, rng, theta, size):
        theta = self._check_natural(theta)
        return rng.gamma(shape=self.alpha, scale=-1.0 / theta, size=size)


class GaussianLocationFamily(Family):
    """Gaussian with known covariance ``cov``; the mean varies.

    In natural form theta = B^-1 mu with cumulant theta.B.theta / 2, so the
    mean map is theta -> B theta and the covariance is constant.
    """

    natural_domain = REAL_LINE
    support_domain = REAL_LINE

    def __init__(self, cov=1.0):
        self.cov = cov
        B = np.atleast_2d(np.asarray(cov, dtype=float))
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise DomainError(f"cov must be square, got shape {B.shape}")
        if not np.allclose(B, B.T, rtol=1e-12, atol=1e-12):
            raise DomainError("cov must be symmetric")
        eigvals = np.linalg.eigvalsh(B)
        if np.min(eigvals) <= 0:
            raise DomainError(f"cov must be positive definite, eigvals={eigvals}")
        self._B = B
        self._B_inv = np.linalg.inv(B)
        self._logdet = float(np.linalg.slogdet(B)[1])

    @property
    def d(self):
        return self._B.shape[0]

    def _vec(self, v, name):
        if self.d == 1 and np.ndim(v) == 0:
            v = [v]
        v = np.asarray(v, dtype=float)
        if v.shape != (self.d,):
            raise DomainError(f"{name} must have shape ({self.d},), got {v.shape}")
        return v

    def in_natural_domain(self, theta):
        return bool(np.all(np.isfinite(np.atleast_1d(theta))))

    def in_mean_domain(self, mu):
        return bool(np.all(np.isfinite(np.atleast_1d(mu))))

    def in_support(self, x):
        return bool(np.all(np.isfinite(np.atleast_1d(x))))

    def _check_natural(self, theta):
        scalar = self.d == 1 and np.ndim(theta) == 0
        v = self._vec(theta, "theta")
        if not self.in_natural_domain(v):
            raise DomainError(f"{theta!r} is outside the natural domain")
        return float(v[0]) if scalar else v

    def _check_mean(self, mu):
        scalar = self.d == 1 and np.ndim(mu) == 0
        v = self._vec(mu, "mu")
        if not self.in_mean_domain(v):
            raise DomainError(f"{mu!r} is outside the mean domain")
        return float(v[0]) if scalar else v

    def _check_support(self, x):
        scalar = self.d == 1 and np.ndim(x) == 0
        v = self._vec(x, "x")
        if not self.in_support(v):
            raise SupportError(f"{x!r} is outside the support")
        return float(v[0]) if scalar else v

    def cumulant(self, theta):
        theta = np.atleast_1d(self._check_natural(theta))
        return 0.5 * float(theta @ self._B @ theta)

    def mean_from_natural(self, theta):
        scalar = self.d == 1 and np.ndim(theta) == 0
        theta = np.atleast_1d(self._check_natural(theta))
        mu = self._B @ theta
        return float(mu[0]) if scalar else mu

    def covariance(self, theta):
        self._check_natural(theta)
        return float(self._B[0, 0]) if self.d == 1 else self._B.copy()

    def mle(self, xbar):
        scalar = self.d == 1 and np.ndim(xbar) == 0
        xbar = np.atleast_1d(self._check_mean(xbar))
        theta = np.linalg.solve(self._B, xbar)
        return float(theta[0]) if scalar else theta

    def log_carrier(self, x):
        x = np.atleast_1d(self._check_support(x))
        return (
            -0.5 * float(x @ self._B_inv @ x)
            - 0.5 * self.d * math.log(TAU)
            - 0.5 * self._logdet
        )

    def convolution_family(self, k):
        return GaussianLocationFamily(int(k) * self._B)

    def sample(self, rng, theta, size):
        theta = np.atleast_1d(self._check_natural(theta))
        mu = self._B @ theta
        draws = rng.multivariate_normal(mu, self._B, size=size, method="cholesky")
        return draws[..., 0] if self.d == 1 else draws


class InverseGaussianFamily(Family):
    """Inverse Gaussian with fixed shape ``kappa``; the mean varies."""

    def __init__(self, kappa):
        self.kappa = kappa
        check_positive(kappa, "kappa")

    def in_natural_domain(self, theta):
        return np.isfinite(theta) and theta < 0

    def in_mean_domain(self, mu):
        return np.isfinite(mu) and mu > 0

    def in_support(self, x):
        return np.isfinite(x) and x > 0

    def cumulant(self, theta):
        theta = self._check_natural(theta)
        return -math.sqrt(-2.0 * self.kappa * theta)

    def mean_from_natural(self, theta):
        theta = self._check_natural(theta)
        return math.sqrt(self.kappa / (-2.0 * theta))

    def covariance(self, theta):
        theta = self._check_natural(theta)
        return 0.5 * math.sqrt(self.kappa / 2.0) * (-theta) ** -1.5

    def mle(self, xbar):
        xbar = self._check_mean(xbar)
        return -self.kappa / (2.0 * xbar**2)

    def log_carrier(self, x):
        x = self._check_support(x)
        return 0.5 * (
            math.log(self.kappa) - math.log(TAU) - 3.0 * math.log(x)
        ) - self.kappa / (2.0 * x)

    def log_jeffreys(self, theta):
        theta = self._check_natural(theta)
        return 0.5 * math.log(0.5 * math.sqrt(self.kappa / 2.0)) - 0.75 * math.log(
            -theta
        )

    def convolution_family(self, k):
        return InverseGaussianFamily(int(k) ** 2 * self.kappa)

    def sample(self, rng, theta, size):
        mean = self.mean_from_natural(theta)
        return rng.wald(mean, self.kappa, size=size)


class PoissonExponentialFamily(Family):
    """Compound Poisson of exponentials (Tweedie order 3/2), shape ``kappa``.

    The carrier places an atom of weight one at zero, so x = 0 carries
    probability mass exp(-A(theta)) while x > 0 carries a density.
    """

    has_atom = True
    atom_point = 0.0

    def __init__(self, kappa):
        self.kappa = kappa
        check_positive(kappa, "kappa")

    def in_natural_domain(self, theta):
        return np.isfinite(theta) and theta < 0

    def in_mean_domain(self, mu):
        return np.isfinite(mu) and mu > 0

    def in_support(self, x):
        return np.isfinite(x) and x >= 0

    def cumulant(self, theta):
        theta = self._check_natural(theta)
        return self.kappa / (2.0 * (-theta))

    def mean_from_natural(self, theta):
        theta = self._check_natural(theta)
        return self.kappa / (2.0 * theta**2)

    def covariance(self, theta):
        theta = self._check_natural(theta)
        return self.kappa / (-theta) ** 3

    def mle(self, xbar):
        xbar = self._check_mean(xbar)
        return -math.sqrt(self.kappa / (2.0 * xbar))

    def log_carrier(self, x):
        x = self._check_support(x)
        if x == 0.0:
            return 0.0
        return pe_log_series_factor(self.kappa, x)

    def log_jeffreys(self, theta):
        theta = self._check_natural(theta)
        return 0.5 * math.log(self.kappa) - 1.5 * math.log(-theta)

    def convolution_family(self, k):
        return PoissonExponentialFamily(int(k) * self.kappa)

    def sample(self, rng, theta, size):
        theta = self._check_natural(theta)
        return PoissonExponentialDist(self.kappa, -theta).sample(rng, size)


@dataclass(frozen=True)
class ConjugatePair:
    """A family together with its conjugated exponential family."""

    primal: Family
    dual: Family
    self_conjugate: bool


def conjugate_family(family):
    """Map a family to its conjugated exponential family.

    Gamma and Gaussian location are self-conjugated (the Gaussian dual
    carries the inverse covariance); inverse Gaussian and
    Poisson-exponential swap with each other, up to the sign change of the
    natural parameter.
    """
    if isinstance(family, GammaFamily):
        return ConjugatePair(family, GammaFamily(family.alpha), True)
    if isinstance(family, GaussianLocationFamily):
        return ConjugatePair(family, GaussianLocationFamily(family._B_inv), True)
    if isinstance(family, InverseGaussianFamily):
        return ConjugatePair(family, PoissonExponentialFamily(family.kappa), False)
    if isinstance(family, PoissonExponentialFamily):
        return ConjugatePair(family, InverseGaussianFamily(family.kappa), False)
    raise DomainError(f"no conjugation rule for {type(family).__name__}")


def gamma_density(alpha, beta, x):
    """Gamma density beta^alpha x^(alpha-1) exp(-beta x) / Gamma(alpha)."""
    check_positive(alpha, "alpha")
    check_positive(beta, "beta")
    if x <= 0:
        raise SupportError(f"gamma support is x > 0, got {x}")
    return GammaPosterior(alpha, beta).pdf(x)


def gamma_posterior(alpha, batch):
    """Jeffreys posterior of the rate: Gamma(m*alpha, m*xbar)."""
    check_positive(alpha, "alpha")
    xbar = float(batch.xbar)
    if xbar <= 0:
        raise DomainError(f"posterior needs xbar > 0, got {xbar}")
    return GammaPosterior(shape=batch.n * alpha, rate=batch.n * xbar)


def poisson_exponential_posterior(kappa, batch):
    """Jeffreys posterior of the rate: inverse Gaussian.

    Normalizing beta^(-3/2) exp(-m*beta*xbar - m*kappa/(2*beta)) gives an
    inverse Gaussian with mean sqrt(kappa/(2*xbar)) and shape m*kappa.
    """
    check_positive(kappa, "kappa")
    xbar = float(batch.xbar)
    if xbar <= 0:
        raise DomainError(f"posterior needs xbar > 0, got {xbar}")
    return InverseGaussianDist(
        mean=math.sqrt(kappa / (2.0 * xbar)), shape=batch.n * kappa
    )


def tweedie_variance_function(kappa, mu):
    """Variance of the Poisson-exponential family at mean mu.

    The power form phi * mu^(3/2) with phi = 2^(3/2) kappa^(-1/2) is what
    makes this a Tweedie family of order 3/2.
    """
    check_positive(kappa, "kappa")
    check_positive(mu, "mu")
    phi = 2.0**1.5 * kappa**-0.5
    return phi * mu**1.5


def self_conjugacy_defect(family, cov, grid):
    """sup over the grid of |A*(x) - A(B^-1 x)| for a linear map B.

    A vanishing defect certifies the functional equation A* = A o B that
    characterizes Gaussian location families.  When B^-1 x falls outside
    the natural domain the equation is unsatisfiable at that grid point
    and the defect is infinite.
    """
    B = np.atleast_2d(np.asarray(cov, dtype=float))
    if B.shape[0] != B.shape[1]:
        raise DomainError(f"cov must be square, got {B.shape}")
    B_inv = np.linalg.inv(B)
    worst = 0.0
    for x in grid:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        mapped = B_inv @ x
        arg = float(mapped[0]) if family.d == 1 else mapped
        target = float(x[0]) if family.d == 1 else x
        if not family.in_natural_domain(arg):
            return math.inf
        if not family.in_mean_domain(target):
            raise DomainError(f"grid point {x} is outside the mean domain")
        defect = abs(family.convex_conjugate(target) - family.cumulant(arg))
        worst = max(worst, defect)
    return worst
