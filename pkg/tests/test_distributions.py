"""Tests for the concrete distribution objects.

The inverse Gaussian cdf is audited against quadrature of its own density
and against the Gaussian limit; the compound-Poisson series against a
Bessel-function identity, quadrature, and Monte Carlo simulation.
"""

import math

import numpy as np
import pytest
from scipy import special

from expfam.distributions import (
    GammaPosterior,
    InverseGaussianDist,
    PoissonExponentialDist,
    pe_log_series_factor,
)
from expfam.errors import DomainError, SupportError
from expfam.numerics import Bracket, find_root, integrate, rng_stream

TAU = 2.0 * math.pi


class TestGammaPosterior:
    def test_pdf_value(self):
        assert GammaPosterior(1.0, 1.0).pdf(1.0) == pytest.approx(math.exp(-1.0))

    def test_cdf_ppf_round_trip(self):
        post = GammaPosterior(2.5, 1.7)
        for p in (0.05, 0.5, 0.95):
            assert post.cdf(post.ppf(p)) == pytest.approx(p, abs=1e-12)

    def test_moments(self):
        post = GammaPosterior(6.0, 1.5)
        assert post.mean == pytest.approx(4.0)
        assert post.variance == pytest.approx(6.0 / 1.5**2)

    def test_validation(self):
        with pytest.raises(DomainError):
            GammaPosterior(0.0, 1.0)
        with pytest.raises(SupportError):
            GammaPosterior(1.0, 1.0).log_pdf(0.0)


class TestInverseGaussianDensity:
    def test_value_at_the_mean(self):
        dist = InverseGaussianDist(1.0, 1.0)
        assert dist.pdf(1.0) == pytest.approx(math.sqrt(1.0 / TAU), abs=1e-12)

    def test_integrates_to_one(self):
        for mean, shape in ((1.0, 1.0), (0.7, 2.0), (2.5, 0.5)):
            dist = InverseGaussianDist(mean, shape)
            mass = integrate(dist.pdf, 0.0, math.inf, tol=1e-11, points=[mean])
            assert mass.value == pytest.approx(1.0, abs=1e-9)

    def test_mean_by_quadrature(self):
        dist = InverseGaussianDist(0.8, 1.5)
        mean = integrate(
            lambda x: x * dist.pdf(x), 0.0, math.inf, tol=1e-11, points=[0.8]
        ).value
        assert mean == pytest.approx(0.8, abs=1e-8)


class TestInverseGaussianCdf:
    def test_limits(self):
        dist = InverseGaussianDist(1.0, 1.0)
        assert dist.cdf(1e-10) == pytest.approx(0.0, abs=1e-12)
        assert dist.cdf(1e6) == pytest.approx(1.0, abs=1e-9)
        assert dist.cdf(0.0) == 0.0

    def test_monotone(self):
        dist = InverseGaussianDist(1.3, 0.9)
        xs = np.linspace(0.01, 10.0, 200)
        values = [dist.cdf(x) for x in xs]
        assert np.all(np.diff(values) >= 0)

    def test_derivative_matches_density(self):
        dist = InverseGaussianDist(1.0, 2.0)
        for x in (0.4, 1.0, 2.7):
            h = 1e-6
            numeric = (dist.cdf(x + h) - dist.cdf(x - h)) / (2 * h)
            assert numeric == pytest.approx(dist.pdf(x), rel=1e-6)

    def test_median_against_quadrature_inversion(self):
        dist = InverseGaussianDist(1.0, 1.0)

        def quad_cdf(x):
            return integrate(dist.pdf, 0.0, x, tol=1e-12).value

        oracle = find_root(lambda x: quad_cdf(x) - 0.5, Bracket(0.05, 5.0), tol=1e-12)
        assert dist.ppf(0.5) == pytest.approx(oracle, abs=1e-8)

    def test_gaussian_limit_at_large_shape(self):
        # the cdf at the mean approaches 1/2 like 1/(2 sqrt(tau kappa)); at
        # kappa = 1e4 the true gap is ~2e-3, so the tolerance is 2.5e-3
        # rather than the naive 1e-3, and the gap shrinks with kappa
        gap_1e4 = abs(InverseGaussianDist(1.0, 1e4).cdf(1.0) - 0.5)
        gap_1e6 = abs(InverseGaussianDist(1.0, 1e6).cdf(1.0) - 0.5)
        assert gap_1e4 < 2.5e-3
        assert gap_1e6 < gap_1e4 / 9.0
        assert gap_1e4 == pytest.approx(0.5 / math.sqrt(TAU * 1e4), rel=1e-2)

    def test_ppf_round_trip(self):
        dist = InverseGaussianDist(0.7071068, 2.0)
        for p in (0.05, 0.25, 0.5, 0.75, 0.9, 0.99):
            assert dist.cdf(dist.ppf(p)) == pytest.approx(p, abs=1e-8)

    def test_large_shape_stability(self):
        # exp(2*shape/mean) overflows the naive two-term formula
        dist = InverseGaussianDist(0.5, 5000.0)
        value = dist.cdf(0.5)
        assert 0.0 < value < 1.0

    def test_sampling_moments(self):
        dist = InverseGaussianDist(1.5, 2.0)
        draws = dist.sample(rng_stream(5, 0), 200_000)
        sd = math.sqrt(1.5**3 / 2.0)
        assert abs(draws.mean() - 1.5) < 3.0 * sd / math.sqrt(draws.size)


class TestPoissonExponentialSeries:
    def test_matches_bessel_identity(self):
        # sum_{k>=1} z^k x^(k-1)/(k!(k-1)!) = sqrt(z/x) I_1(2 sqrt(z x))
        for kappa in (0.5, 2.0, 8.0):
            z = kappa / 2.0
            for x in (0.01, 0.7, 3.0, 40.0):
                oracle = (
                    0.5 * math.log(z / x)
                    + math.log(special.ive(1, 2.0 * math.sqrt(z * x)))
                    + 2.0 * math.sqrt(z * x)
                )
                assert pe_log_series_factor(kappa, x) == pytest.approx(
                    oracle, abs=1e-12
                )

    def test_support_error(self):
        with pytest.raises(SupportError):
            pe_log_series_factor(1.0, 0.0)


class TestPoissonExponentialDist:
    def test_atom_weight(self):
        dist = PoissonExponentialDist(2.0, 1.0)
        assert dist.atom_weight == pytest.approx(math.exp(-1.0), abs=1e-12)

    def test_total_mass_on_grid(self):
        for kappa in (0.5, 1.0, 2.0, 4.0):
            for beta in (0.5, 1.0, 2.0, 4.0):
                dist = PoissonExponentialDist(kappa, beta)
                quad = integrate(
                    dist.density, 0.0, math.inf, tol=1e-11, points=[dist.mean]
                )
                assert dist.atom_weight + quad.value == pytest.approx(1.0, abs=1e-9)

    def test_cdf_at_zero_is_atom(self):
        dist = PoissonExponentialDist(2.0, 1.0)
        assert dist.cdf(0.0) == dist.atom_weight

    def test_cdf_upper_limit(self):
        dist = PoissonExponentialDist(2.0, 1.0)
        assert dist.cdf(200.0) == pytest.approx(1.0, abs=1e-12)

    def test_cdf_matches_quadrature(self):
        dist = PoissonExponentialDist(1.5, 0.8)
        for x in np.linspace(0.2, 8.0, 20):
            oracle = dist.atom_weight + integrate(
                dist.density, 0.0, float(x), tol=1e-12
            ).value
            assert dist.cdf(float(x)) == pytest.approx(oracle, abs=1e-9)

    def test_cdf_monotone(self):
        dist = PoissonExponentialDist(2.0, 1.0)
        xs = np.linspace(0.0, 20.0, 300)
        values = [dist.cdf(x) for x in xs]
        assert np.all(np.diff(values) >= -1e-15)

    def test_large_poisson_rate_cdf(self):
        # window-truncated Poisson mixture must stay accurate at lambda >> 30
        dist = PoissonExponentialDist(2000.0, 0.01)  # lambda = 1e5
        mid = dist.cdf(dist.mean)
        assert 0.3 < mid < 0.7

    def test_monte_carlo_atom_and_mean(self):
        # compound Poisson(lambda=1) of Exp(1): kappa = 2 lambda beta = 2
        dist = PoissonExponentialDist(2.0, 1.0)
        n = 1_000_000
        draws = dist.sample(rng_stream(17, 3), n)
        p0 = float(np.mean(draws == 0.0))
        assert abs(p0 - math.exp(-1.0)) < 0.002
        # mean lambda/beta = 1, variance E[N] E[X^2] = 2
        assert abs(draws.mean() - 1.0) < 3.0 * math.sqrt(2.0 / n)

    def test_density_derivative_of_cdf(self):
        dist = PoissonExponentialDist(2.0, 1.0)
        for x in (0.5, 1.5, 4.0):
            h = 1e-6
            numeric = (dist.cdf(x + h) - dist.cdf(x - h)) / (2 * h)
            assert numeric == pytest.approx(dist.density(x), rel=1e-6)
