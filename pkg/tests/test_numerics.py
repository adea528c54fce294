"""Tests for the numerical substrate.

Special functions are checked against closed-form identities and against
independent quadrature oracles; quadrature against exactly integrable
cases; root finding against a plain bisection oracle.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expfam.errors import DomainError, NoSignChangeError, NonConvergenceError
from expfam.numerics import (
    Bracket,
    find_root,
    integrate,
    inv_reg_gamma_lower,
    log_gamma,
    reg_gamma_lower,
    rng_stream,
    std_normal_cdf,
    std_normal_quantile,
)


class TestLogGamma:
    def test_integer_values(self):
        assert log_gamma(1.0) == 0.0
        assert log_gamma(2.0) == 0.0

    def test_half_sqrt_pi_identity(self):
        # Gamma(1/2) = sqrt(pi)
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-13)

    def test_relative_accuracy_against_recursion(self):
        # Gamma(x+1) = x Gamma(x) exercised across magnitudes
        for x in (0.1, 0.9, 3.7, 25.0, 140.5):
            lhs = log_gamma(x + 1.0)
            rhs = log_gamma(x) + math.log(x)
            assert lhs == pytest.approx(rhs, rel=1e-13)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            log_gamma(0.0)
        with pytest.raises(DomainError):
            log_gamma(-1.5)


class TestRegGammaLower:
    def test_at_zero(self):
        assert reg_gamma_lower(1.0, 0.0) == 0.0

    def test_exponential_cdf_closed_form(self):
        # P(1, x) = 1 - exp(-x)
        assert reg_gamma_lower(1.0, math.log(10.0)) == pytest.approx(0.9, abs=1e-14)

    def test_against_quadrature_oracle(self):
        a, x = 2.5, 2.5
        norm = math.exp(log_gamma(a))
        oracle = integrate(
            lambda t: t ** (a - 1.0) * math.exp(-t) / norm, 0.0, x, tol=1e-12
        ).value
        value = reg_gamma_lower(a, x)
        assert 0.0 < value < 1.0
        assert value == pytest.approx(oracle, abs=1e-10)

    def test_monotone_in_x(self):
        xs = np.linspace(0.0, 12.0, 60)
        values = [reg_gamma_lower(1.7, x) for x in xs]
        assert np.all(np.diff(values) >= 0)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            reg_gamma_lower(0.0, 1.0)
        with pytest.raises(DomainError):
            reg_gamma_lower(1.0, -0.1)


class TestInvRegGammaLower:
    def test_exponential_quantile(self):
        assert inv_reg_gamma_lower(1.0, 0.9) == pytest.approx(
            -math.log(0.1), abs=1e-12
        )

    def test_inverse_at_one(self):
        assert inv_reg_gamma_lower(1.0, 1.0 - math.exp(-1.0)) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_round_trip_grid(self):
        # quantile o cdf = identity on a 100-point grid spanning p in
        # (~0.1, 0.999); beyond that the inversion is ill-conditioned in
        # doubles because the density underflows relative to ulp(1)
        for a in (0.5, 1.0, 3.5):
            xs = np.linspace(0.05, inv_reg_gamma_lower(a, 0.999), 100)
            for x in xs:
                p = reg_gamma_lower(a, x)
                assert inv_reg_gamma_lower(a, p) == pytest.approx(x, abs=1e-9)

    @settings(deadline=None, max_examples=50)
    @given(
        a=st.floats(min_value=0.1, max_value=50.0),
        p=st.floats(min_value=0.01, max_value=0.99),
    )
    def test_round_trip_property(self, a, p):
        x = inv_reg_gamma_lower(a, p)
        assert reg_gamma_lower(a, x) == pytest.approx(p, abs=1e-10)

    def test_domain_errors(self):
        for p in (0.0, 1.0, -0.1, 1.1):
            with pytest.raises(DomainError):
                inv_reg_gamma_lower(1.0, p)


class TestStdNormal:
    def test_symmetry_point(self):
        assert std_normal_cdf(0.0) == 0.5

    def test_upper_limit(self):
        assert std_normal_cdf(40.0) == 1.0

    def test_against_quadrature_oracle(self):
        z = 1.959963985
        density = lambda t: math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)
        oracle = 0.5 + integrate(density, 0.0, z, tol=1e-13).value
        assert std_normal_cdf(z) == pytest.approx(oracle, abs=1e-14)
        assert std_normal_cdf(z) == pytest.approx(0.975, abs=1e-9)

    def test_quantile_round_trip(self):
        for p in np.linspace(0.001, 0.999, 100):
            z = std_normal_quantile(p)
            assert std_normal_cdf(z) == pytest.approx(p, abs=1e-10)

    def test_quantile_domain(self):
        for p in (0.0, 1.0, 1.5):
            with pytest.raises(DomainError):
                std_normal_quantile(p)


class TestIntegrate:
    def test_exponential_tail(self):
        result = integrate(lambda x: math.exp(-x), 0.0, math.inf, tol=1e-11)
        assert result.value == pytest.approx(1.0, abs=1e-11)
        assert result.evaluations > 0
        assert result.error_estimate <= 1e-10

    def test_gamma_moment(self):
        result = integrate(lambda b: b * math.exp(-2.0 * b), 0.0, math.inf, tol=1e-11)
        assert result.value == pytest.approx(0.25, abs=1e-11)

    def test_endpoint_singularity(self):
        # integral of x^(-1/2) exp(-x) = Gamma(1/2)
        result = integrate(
            lambda x: x**-0.5 * math.exp(-x), 0.0, math.inf, tol=1e-10
        )
        assert result.value == pytest.approx(math.exp(log_gamma(0.5)), abs=1e-9)

    def test_linearity(self):
        f = lambda x: math.exp(-x)
        g = lambda x: x * math.exp(-2.0 * x)
        combo = integrate(
            lambda x: 3.0 * f(x) + 5.0 * g(x), 0.0, math.inf, tol=1e-11
        )
        parts = 3.0 * integrate(f, 0.0, math.inf, tol=1e-11).value + 5.0 * integrate(
            g, 0.0, math.inf, tol=1e-11
        ).value
        assert combo.value == pytest.approx(parts, abs=1e-10)

    def test_interior_split_points(self):
        # a narrow bump far from the origin is found thanks to the split
        center = 50.0
        bump = lambda x: math.exp(-((x - center) ** 2) * 200.0)
        result = integrate(bump, 0.0, math.inf, tol=1e-11, points=[center])
        assert result.value == pytest.approx(
            math.sqrt(math.pi / 200.0), rel=1e-9
        )

    def test_purity(self):
        f = lambda x: math.exp(-x) * math.cos(x)
        first = integrate(f, 0.0, math.inf, tol=1e-11)
        second = integrate(f, 0.0, math.inf, tol=1e-11)
        assert first == second

    def test_non_convergence_on_divergent_integrand(self):
        with pytest.raises(NonConvergenceError):
            integrate(lambda x: 1.0 / x, 0.0, 1.0, tol=1e-10)

    def test_empty_domain(self):
        with pytest.raises(DomainError):
            integrate(math.exp, 1.0, 1.0)


def _bisect(f, lo, hi, iterations=80):
    flo = f(lo)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if (flo < 0) == (fmid < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestFindRoot:
    def test_linear(self):
        root = find_root(lambda t: t + 0.5, Bracket(-1.0, 0.0))
        assert root == pytest.approx(-0.5, abs=1e-12)

    def test_gamma_mean_equation(self):
        # -alpha/theta = 2 with alpha = 1 has the root theta = -1/2
        root = find_root(lambda t: -1.0 / t - 2.0, Bracket(-1.0, -0.01))
        assert root == pytest.approx(-0.5, abs=1e-12)

    def test_monotone_cubic_vs_bisection(self):
        f = lambda t: t**3 + 2.0 * t - 1.7
        root = find_root(f, Bracket(0.0, 2.0), tol=1e-13)
        oracle = _bisect(f, 0.0, 2.0)
        assert root == pytest.approx(oracle, abs=1e-12)

    def test_no_sign_change(self):
        with pytest.raises(NoSignChangeError):
            find_root(lambda t: t * t + 1.0, Bracket(-1.0, 1.0))

    def test_bad_bracket(self):
        with pytest.raises(DomainError):
            Bracket(1.0, 1.0)

    def test_determinism(self):
        f = lambda t: math.tanh(t) - 0.3
        assert find_root(f, Bracket(-2.0, 2.0)) == find_root(f, Bracket(-2.0, 2.0))


class TestRngStream:
    def test_reproducible(self):
        a = rng_stream(42, 0).random(8)
        b = rng_stream(42, 0).random(8)
        np.testing.assert_array_equal(a, b)

    def test_streams_differ(self):
        a = rng_stream(42, 0).random(8)
        b = rng_stream(42, 1).random(8)
        assert not np.allclose(a, b)

    def test_uniform_mean(self):
        draws = rng_stream(7, 0).random(100_000)
        assert abs(draws.mean() - 0.5) < 0.005

    def test_gamma_variates_moment(self):
        # Gamma(shape 2, rate 3): mean 2/3, sd sqrt(2)/3
        n = 100_000
        draws = rng_stream(11, 2).gamma(shape=2.0, scale=1.0 / 3.0, size=n)
        tolerance = 3.0 * (math.sqrt(2.0) / 3.0) / math.sqrt(n)
        assert abs(draws.mean() - 2.0 / 3.0) < tolerance

    def test_poisson_variates_moment(self):
        n = 100_000
        draws = rng_stream(13, 5).poisson(4.0, size=n)
        assert abs(draws.mean() - 4.0) < 3.0 * 2.0 / math.sqrt(n)
