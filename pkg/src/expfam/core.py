"""Generic natural-exponential-family machinery.

A family here is a parametrized set of distributions with density

    p_theta(x) = exp(theta . x - A(theta)) * h(x)

against Lebesgue measure (plus an explicit atom for the compound-Poisson
case), where A is the cumulant function of the family's carrier h.  The
gradient of A is the mean map, its Hessian the covariance.  Concrete
families supply closed forms for A, its derivatives, the MLE and the
carrier; everything else (Bregman divergence, convex conjugate, Jeffreys
factor, densities, the robustness ratio) is derived here once.

Conventions used throughout:

* natural parameters and mean parameters are floats for one-dimensional
  families and 1-d ``numpy`` arrays for the Gaussian location family;
* ``TAU`` is the circle constant 2*pi, which is how the saddle-point
  normalization is written everywhere in this package.
"""

import math
from dataclasses import dataclass

import numpy as np

from .base import ParamsMixin
from .errors import DomainError, SupportError
from .numerics import DEFAULT_TOL, integrate

TAU = 2.0 * math.pi

#: Tags for the shape of the natural parameter domain and of the support.
NEGATIVE_HALF_LINE = "negative_half_line"
POSITIVE_HALF_LINE = "positive_half_line"
REAL_LINE = "real_line"


@dataclass(frozen=True)
class ObservationBatch:
    """Sufficient summary of an iid sample: size and mean statistic.

    ``raw`` optionally keeps the individual observations for operations
    that need carrier terms over the whole sequence.
    """

    n: int
    xbar: object
    raw: tuple = None

    def __post_init__(self):
        if int(self.n) < 1:
            raise DomainError(f"batch size must be >= 1, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if isinstance(self.xbar, np.ndarray):
            object.__setattr__(self, "xbar", self.xbar.astype(float))
        else:
            object.__setattr__(self, "xbar", float(self.xbar))
        if self.raw is not None:
            raw = tuple(
                tuple(np.atleast_1d(np.asarray(r, dtype=float)))
                if np.ndim(r) > 0
                else float(r)
                for r in self.raw
            )
            object.__setattr__(self, "raw", raw)
            if len(raw) != self.n:
                raise DomainError(f"raw has {len(raw)} entries, expected n={self.n}")
            mean = np.mean(np.asarray(raw, dtype=float), axis=0)
            if not np.allclose(mean, self.xbar, rtol=1e-12, atol=1e-12):
                raise DomainError("average of raw observations does not match xbar")

    @classmethod
    def from_observations(cls, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            return cls(n=X.shape[0], xbar=float(X.mean()), raw=tuple(X))
        return cls(n=X.shape[0], xbar=X.mean(axis=0), raw=tuple(map(tuple, X)))


class Family(ParamsMixin):
    """Abstract natural exponential family.

    Subclasses define the closed forms; the natural domain is either the
    negative half line (Gamma, inverse Gaussian, Poisson-exponential) or
    all of R^d (Gaussian location).
    """

    natural_domain = NEGATIVE_HALF_LINE
    support_domain = POSITIVE_HALF_LINE
    #: True when the carrier measure places an atom at ``atom_point``.
    has_atom = False
    atom_point = 0.0

    # -- closed forms supplied by subclasses --------------------------------

    @property
    def d(self):
        return 1

    def cumulant(self, theta):
        raise NotImplementedError

    def mean_from_natural(self, theta):
        raise NotImplementedError

    def covariance(self, theta):
        raise NotImplementedError

    def mle(self, xbar):
        raise NotImplementedError

    def log_carrier(self, x):
        raise NotImplementedError

    def in_natural_domain(self, theta):
        raise NotImplementedError

    def in_mean_domain(self, mu):
        raise NotImplementedError

    def in_support(self, x):
        raise NotImplementedError

    def sample(self, rng, theta, size):
        """Draw iid observations under the natural parameter ``theta``."""
        raise NotImplementedError

    def convolution_family(self, k):
        """The family of sums of k iid observations from this one.

        Its carrier is the k-fold convolution of this family's carrier,
        which is what multi-step normalizers integrate against.
        """
        if int(k) == 1:
            return self
        raise NotImplementedError(
            f"{type(self).__name__} does not define k-fold convolutions"
        )

    # -- validation ----------------------------------------------------------

    def _check_natural(self, theta):
        if self.d == 1:
            theta = float(theta)
        else:
            theta = np.asarray(theta, dtype=float)
            if theta.shape != (self.d,):
                raise DomainError(
                    f"natural parameter must have shape ({self.d},), got {theta.shape}"
                )
        if not self.in_natural_domain(theta):
            raise DomainError(f"{theta!r} is outside the natural domain of {self!r}")
        return theta

    def _check_mean(self, mu):
        if self.d == 1:
            mu = float(mu)
        else:
            mu = np.asarray(mu, dtype=float)
            if mu.shape != (self.d,):
                raise DomainError(
                    f"mean parameter must have shape ({self.d},), got {mu.shape}"
                )
        if not self.in_mean_domain(mu):
            raise DomainError(f"{mu!r} is outside the mean domain of {self!r}")
        return mu

    def _check_support(self, x):
        if self.d == 1:
            x = float(x)
        else:
            x = np.asarray(x, dtype=float)
            if x.shape != (self.d,):
                raise SupportError(
                    f"observation must have shape ({self.d},), got {x.shape}"
                )
        if not self.in_support(x):
            raise SupportError(f"{x!r} is outside the support of {self!r}")
        return x

    # -- derived operations ---------------------------------------------------

    def bregman(self, theta2, theta1):
        """Divergence generated by the cumulant: A(t2) - A(t1) - (t2-t1).grad A(t1)."""
        theta2 = self._check_natural(theta2)
        theta1 = self._check_natural(theta1)
        grad = self.mean_from_natural(theta1)
        dot = np.dot(
            np.atleast_1d(theta2) - np.atleast_1d(theta1), np.atleast_1d(grad)
        )
        div = self.cumulant(theta2) - self.cumulant(theta1) - float(dot)
        # convexity guarantees nonnegativity; clip roundoff at zero
        return max(div, 0.0)

    def kl_divergence(self, theta1, theta2):
        """Information divergence D(P_theta1 || P_theta2) = bregman(theta2, theta1)."""
        return self.bregman(theta2, theta1)

    def convex_conjugate(self, x):
        """A*(x) = theta_hat(x) . x - A(theta_hat(x)) on the mean domain."""
        x = self._check_mean(x)
        theta_hat = self.mle(x)
        dot = float(np.dot(np.atleast_1d(theta_hat), np.atleast_1d(x)))
        return dot - self.cumulant(theta_hat)

    def jeffreys_unnormalized(self, theta):
        """Square root of the Fisher determinant, det Cov(theta)^(1/2)."""
        theta = self._check_natural(theta)
        cov = self.covariance(theta)
        if self.d == 1:
            return math.sqrt(cov)
        det = float(np.linalg.det(cov))
        return math.sqrt(det)

    def log_jeffreys(self, theta):
        """ln of ``jeffreys_unnormalized``; overridden where the linear form overflows."""
        return math.log(self.jeffreys_unnormalized(theta))

    def log_density(self, theta, x):
        """Log density against Lebesgue measure (atom mass at an atom point)."""
        theta = self._check_natural(theta)
        x = self._check_support(x)
        dot = float(np.dot(np.atleast_1d(theta), np.atleast_1d(x)))
        return dot - self.cumulant(theta) + self.log_carrier(x)

    def density(self, theta, x):
        return math.exp(self.log_density(theta, x))

    def log_likelihood(self, theta, batch):
        """Carrier-free part of the log likelihood, n*(theta.xbar - A(theta))."""
        theta = self._check_natural(theta)
        dot = float(np.dot(np.atleast_1d(theta), np.atleast_1d(batch.xbar)))
        return batch.n * (dot - self.cumulant(theta))

    def robustness_ratio(self, theta, x):
        """Density ratio p_theta(x) / p_that(x)(x) = exp(-bregman(theta, that(x)))."""
        theta = self._check_natural(theta)
        x = self._check_mean(x)
        theta_hat = self.mle(x)
        return math.exp(-self.bregman(theta, theta_hat))


# -- natural-domain quadrature helpers --------------------------------------


def integrate_over_natural(family, g, tol=DEFAULT_TOL, split_thetas=()):
    """Integrate ``g(theta)`` over the family's natural domain (d == 1 only).

    Half-line domains are handled in the rate coordinate beta = -theta;
    ``split_thetas`` are interior mode hints.
    """
    if family.d != 1:
        raise DomainError("natural-domain quadrature is one-dimensional only")
    if family.natural_domain == NEGATIVE_HALF_LINE:
        points = [-float(t) for t in split_thetas]
        return integrate(lambda b: g(-b), 0.0, math.inf, tol=tol, points=points)
    points = [float(t) for t in split_thetas]
    return integrate(g, -math.inf, math.inf, tol=tol, points=points)


def integrate_over_support(family, g, tol=DEFAULT_TOL, split_points=()):
    """Integrate ``g(x)`` over the continuous part of the support (d == 1).

    Half-line supports are integrated after the substitution x = v*v, which
    removes power-type endpoint singularities and turns stretched
    exponential tails (the compound-Poisson case) into plain exponential
    ones.  Any atom the family carries is the caller's business.
    """
    if family.d != 1:
        raise DomainError("support quadrature is one-dimensional only")
    if family.support_domain == POSITIVE_HALF_LINE:
        points = [math.sqrt(p) for p in split_points if p > 0]
        return integrate(
            lambda v: 2.0 * v * g(v * v), 0.0, math.inf, tol=tol, points=points
        )
    return integrate(g, -math.inf, math.inf, tol=tol, points=list(split_points))
