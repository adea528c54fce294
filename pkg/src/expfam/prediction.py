"""Predictive densities and their agreement diagnostics.

Three prediction strategies share one estimator surface: ``fit`` on the
observed prefix, then query log predictive densities of future suffixes.

* ``JeffreysPredictor`` integrates the likelihood of the suffix against
  the (numerically normalized) posterior built from the unnormalized
  Jeffreys prior.  The prior cannot be normalized for the half-line
  families, but the posterior is proper for any prefix of length >= 1
  whose mean statistic is interior.
* ``CnmlPredictor`` normalizes the hindsight maximum-likelihood density of
  the completed sequence over all possible futures.  Writing the hindsight
  likelihood through the conjugate pins the computation down to

      exp(n A*(xbar_n)) * carrier(future) / integral of the same over futures,

  so the prefix enters only through (m, xbar) and prefix carrier terms
  cancel exactly.
* ``PlugInPredictor`` scores the future under the prefix MLE.

All densities are with respect to Lebesgue measure on the observation
space (plus the atom at zero for the compound-Poisson family), and all
internal arithmetic is done in log space.
"""

import math
from dataclasses import dataclass

import numpy as np

from .base import ParamsMixin, check_is_fitted
from .core import (
    Family,
    ObservationBatch,
    integrate_over_natural,
    integrate_over_support,
)
from .errors import (
    DegenerateDataError,
    DomainError,
    ImproperPosteriorError,
    NonConvergenceError,
    NonNormalizableError,
    SupportError,
)
from .families import GammaFamily
from .numerics import DEFAULT_TOL
from .validation import check_observations, check_positive

__all__ = [
    "PredictiveValue",
    "RegretRecord",
    "JeffreysPredictor",
    "CnmlPredictor",
    "PlugInPredictor",
    "make_predictor",
    "regret",
    "lemma1_constancy",
    "Lemma1Report",
    "equivalence_check",
]


@dataclass(frozen=True)
class PredictiveValue:
    """A log predictive density with its normalization error report."""

    log_density: float
    method: str
    normalizer_error: float


@dataclass(frozen=True)
class RegretRecord:
    sequence_id: int
    method: str
    regret: float


def as_batch(family, X):
    """Coerce raw observations (or a ready batch) into an ObservationBatch.

    Every observation must lie in the support and the mean statistic must
    be interior to the mean domain; an all-atom compound-Poisson sample is
    reported as degenerate.
    """
    if isinstance(X, ObservationBatch):
        batch = X
    else:
        X = check_observations(X, family.d)
        for x in X:
            family._check_support(x if family.d > 1 else float(x))
        batch = ObservationBatch.from_observations(X)
    if not family.in_mean_domain(batch.xbar):
        if family.has_atom and np.all(np.atleast_1d(batch.xbar) == family.atom_point):
            raise DegenerateDataError(
                "all observations sit on the atom; the MLE and posterior degenerate"
            )
        raise DomainError(
            f"batch mean {batch.xbar!r} is outside the mean domain of {family!r}"
        )
    return batch


def _check_suffix(family, future):
    future = np.atleast_1d(np.asarray(future, dtype=float))
    if future.ndim != 1 or future.shape[0] < 1:
        raise DomainError("future suffix must be a nonempty 1-d sequence")
    for y in future:
        family._check_support(float(y))
    return future


class _PredictorBase(ParamsMixin):
    method = None

    def __init__(self, family, tol=DEFAULT_TOL):
        self.family = family
        self.tol = tol

    def _validate(self):
        if not isinstance(self.family, Family):
            raise DomainError("family must be a Family instance")
        if self.family.d != 1:
            raise DomainError("predictive quadrature is univariate only")
        check_positive(self.tol, "tol")

    def fit(self, X):
        self._validate()
        self.batch_ = as_batch(self.family, X)
        self._prepare()
        return self

    def _prepare(self):
        pass

    def predictive_value(self, future):
        check_is_fitted(self, "batch_")
        future = _check_suffix(self.family, future)
        log_density, err = self._log_predictive(future)
        return PredictiveValue(log_density, self.method, err)

    def log_predictive(self, future):
        return self.predictive_value(future).log_density

    def score_samples(self, Y):
        """One-step log predictive density at each point of Y."""
        Y = np.atleast_1d(np.asarray(Y, dtype=float))
        return np.array([self.predictive_value([y]).log_density for y in Y])


class JeffreysPredictor(_PredictorBase):
    """Posterior predictive under the (improper) Jeffreys prior."""

    method = "Jeffreys"

    def _log_weight(self, theta, n, xbar):
        fam = self.family
        return n * (theta * xbar - fam.cumulant(theta)) + fam.log_jeffreys(theta)

    def _log_evidence(self, n, xbar):
        """log of integral exp(n(theta xbar - A)) * jeffreys(theta) dtheta."""
        fam = self.family
        if isinstance(fam, GammaFamily):
            # closed form: the posterior is Gamma(n alpha, n xbar)
            a = fam.alpha
            value = (
                0.5 * math.log(a)
                + math.lgamma(n * a)
                - n * a * math.log(n * xbar)
            )
            return value, 0.0
        theta_hat = fam.mle(xbar)
        shift = n * fam.convex_conjugate(xbar) + fam.log_jeffreys(theta_hat)
        result = integrate_over_natural(
            fam,
            lambda t: math.exp(self._log_weight(t, n, xbar) - shift),
            tol=self.tol,
            split_thetas=[theta_hat],
        )
        if result.value <= 0 or not math.isfinite(result.value):
            raise ImproperPosteriorError(
                f"posterior failed to normalize for n={n}, xbar={xbar}"
            )
        return shift + math.log(result.value), result.error_estimate / result.value

    def _prepare(self):
        batch = self.batch_
        self.log_evidence_, self._evidence_rel_err = self._log_evidence(
            batch.n, float(batch.xbar)
        )

    def _log_predictive(self, future):
        batch = self.batch_
        k = future.shape[0]
        n_new = batch.n + k
        xbar_new = (batch.n * float(batch.xbar) + float(future.sum())) / n_new
        log_num, num_err = self._log_evidence(n_new, xbar_new)
        carriers = sum(self.family.log_carrier(float(y)) for y in future)
        err = num_err + self._evidence_rel_err
        return log_num - self.log_evidence_ + carriers, err


class CnmlPredictor(_PredictorBase):
    """Conditional normalized maximum likelihood over a fixed horizon.

    The normalizer integrates the hindsight density over all suffixes of
    the given length.  That integrand depends on the suffix only through
    its sum, and the k-fold convolution of each family's carrier is again
    a carrier of the same kind, so any horizon reduces to one quadrature
    over the sum.
    """

    method = "CNML"

    def __init__(self, family, horizon=1, tol=DEFAULT_TOL):
        super().__init__(family, tol=tol)
        self.horizon = horizon

    def _validate(self):
        super()._validate()
        if int(self.horizon) < 1:
            raise DomainError(f"horizon must be >= 1, got {self.horizon}")

    def _log_hindsight(self, total_stat, n):
        """n * A*(total/n): the carrier-free hindsight code length."""
        fam = self.family
        xbar = total_stat / n
        if not fam.in_mean_domain(xbar):
            return -math.inf
        return n * fam.convex_conjugate(xbar)

    def _sum_normalizer(self, k, shift, tol):
        """Quadrature of exp(n A*((base+s)/n)) against the k-fold carrier."""
        batch = self.batch_
        n = batch.n + k
        base = batch.n * float(batch.xbar)
        conv = self.family.convolution_family(k)
        value = 0.0
        if conv.has_atom:
            value += math.exp(
                self._log_hindsight(base + conv.atom_point, n) - shift
            )

        def integrand(s):
            return math.exp(
                self._log_hindsight(base + s, n) + conv.log_carrier(s) - shift
            )

        result = integrate_over_support(
            conv, integrand, tol=tol, split_points=[k * float(batch.xbar)]
        )
        return value + result.value, result.error_estimate

    def _diverges(self, k, shift):
        """Doubling probe along the tail of the sum-normalizer integrand.

        Declares divergence when s * f(s) has not decayed across three
        decades of doubling, which catches constant and 1/s tails while
        leaving every integrable power or exponential tail alone.
        """
        batch = self.batch_
        n = batch.n + k
        base = batch.n * float(batch.xbar)
        conv = self.family.convolution_family(k)
        logs = []
        for j in range(10, 44, 4):
            s = 2.0**j
            try:
                val = self._log_hindsight(base + s, n) + conv.log_carrier(s) - shift
            except (DomainError, SupportError):
                val = -math.inf
            logs.append(math.log(s) + val)
        return logs[-1] > logs[0] - 2.0 and logs[-1] > -600.0

    def _prepare(self):
        batch = self.batch_
        k = int(self.horizon)
        n = batch.n + k
        shift = self._log_hindsight(n * float(batch.xbar), n)
        try:
            value, err = self._sum_normalizer(k, shift, self.tol)
        except NonConvergenceError:
            if self._diverges(k, shift):
                raise NonNormalizableError(
                    f"CNML normalizer diverges for m={batch.n}, horizon={k}"
                ) from None
            raise
        if not math.isfinite(value) or value <= 0:
            raise NonNormalizableError(
                f"CNML normalizer is not finite/positive: {value}"
            )
        self.log_normalizer_ = shift + math.log(value)
        self._normalizer_rel_err = err / value

    def _log_predictive(self, future):
        batch = self.batch_
        k = future.shape[0]
        if k != int(self.horizon):
            raise DomainError(
                f"this predictor was fitted for horizon {self.horizon}, got {k} points"
            )
        n = batch.n + k
        total = batch.n * float(batch.xbar) + float(future.sum())
        log_num = self._log_hindsight(total, n)
        carriers = sum(self.family.log_carrier(float(y)) for y in future)
        return log_num + carriers - self.log_normalizer_, self._normalizer_rel_err


class PlugInPredictor(_PredictorBase):
    """Scores the future under the MLE of the prefix."""

    method = "PlugIn"

    def _prepare(self):
        self.theta_hat_ = self.family.mle(float(self.batch_.xbar))

    def _log_predictive(self, future):
        total = sum(self.family.log_density(self.theta_hat_, float(y)) for y in future)
        return total, 0.0


_METHODS = {
    "jeffreys": JeffreysPredictor,
    "cnml": CnmlPredictor,
    "plugin": PlugInPredictor,
}


def make_predictor(method, family, horizon=1, tol=DEFAULT_TOL):
    """Predictor factory over the method tags {jeffreys, cnml, plugin}."""
    key = str(method).lower()
    if key not in _METHODS:
        raise DomainError(f"unknown method {method!r}; expected one of {sorted(_METHODS)}")
    if key == "cnml":
        return CnmlPredictor(family, horizon=horizon, tol=tol)
    return _METHODS[key](family, tol=tol)


def regret(family, method, sequence, m, tol=DEFAULT_TOL):
    """Code-length regret of predicting the suffix against the hindsight expert.

    The predictor codes x_{m+1..n} given the prefix; the expert codes the
    whole sequence with the hindsight MLE.  Natural logarithms.
    """
    sequence = check_observations(sequence, 1)
    n = sequence.shape[0]
    m = int(m)
    if not 1 <= m < n:
        raise DomainError(f"need 1 <= m < n, got m={m}, n={n}")
    prefix, future = sequence[:m], sequence[m:]
    predictor = make_predictor(method, family, horizon=n - m, tol=tol).fit(prefix)
    log_pred = predictor.log_predictive(future)
    batch = as_batch(family, sequence)
    theta_hat = family.mle(float(batch.xbar))
    log_hindsight = family.log_likelihood(theta_hat, batch) + sum(
        family.log_carrier(float(x)) for x in sequence
    )
    return log_hindsight - log_pred


@dataclass(frozen=True)
class Lemma1Report:
    values: tuple
    relative_spread: float


def lemma1_constancy(family, n, sequences, tol=DEFAULT_TOL, prior_scale=1.0):
    """The integral of the likelihood ratio against the unnormalized prior.

    For each data sequence computes

        integral exp(-n D_A(theta, theta_hat)) * prior_scale * jeffreys(theta) dtheta

    which depends on the data only through the hindsight estimate; its
    relative spread (max-min over the median) across sequences is the
    constancy statistic.
    """
    check_positive(tol, "tol")
    if family.d != 1:
        raise DomainError("constancy quadrature is univariate only")
    log_scale = math.log(check_positive(prior_scale, "prior_scale"))
    values = []
    for seq in sequences:
        batch = seq if isinstance(seq, ObservationBatch) else as_batch(family, seq)
        if batch.n != n:
            raise DomainError(f"sequence has n={batch.n}, expected {n}")
        theta_hat = family.mle(float(batch.xbar))

        def integrand(t):
            return math.exp(
                -n * family.bregman(t, theta_hat) + family.log_jeffreys(t) + log_scale
            )

        result = integrate_over_natural(
            family, integrand, tol=tol, split_thetas=[theta_hat]
        )
        values.append(result.value)
    values = tuple(values)
    spread = (max(values) - min(values)) / float(np.median(values))
    return Lemma1Report(values=values, relative_spread=spread)


def equivalence_check(family, m, n, prefix_means, future_grid, tol=DEFAULT_TOL):
    """Max |log CNML - log Jeffreys-predictive| over a (prefix, future) grid.

    ``prefix_means`` are observed averages for prefixes of length m;
    ``future_grid`` holds single future points (one-step, n = m + 1) or
    suffix tuples of length n - m.
    """
    m, n = int(m), int(n)
    if not 1 <= m < n:
        raise DomainError(f"need 1 <= m < n, got m={m}, n={n}")
    horizon = n - m
    worst = 0.0
    for xbar in prefix_means:
        batch = ObservationBatch(n=m, xbar=float(xbar))
        try:
            jeffreys = JeffreysPredictor(family, tol=tol).fit(batch)
            cnml = CnmlPredictor(family, horizon=horizon, tol=tol).fit(batch)
        except NonConvergenceError as exc:
            raise NonConvergenceError(
                f"predictor setup failed at prefix xbar={xbar}: {exc}"
            ) from exc
        for entry in future_grid:
            suffix = np.atleast_1d(np.asarray(entry, dtype=float))
            if suffix.shape[0] != horizon:
                raise DomainError(
                    f"future entry {entry!r} has length {suffix.shape[0]}, "
                    f"expected horizon {horizon}"
                )
            try:
                delta = abs(
                    cnml.log_predictive(suffix) - jeffreys.log_predictive(suffix)
                )
            except NonConvergenceError as exc:
                raise NonConvergenceError(
                    f"prediction failed at xbar={xbar}, future={entry!r}: {exc}"
                ) from exc
            worst = max(worst, delta)
    return worst
