"""Tests for the saddle-point profile and its exactness diagnostics."""

import math

import numpy as np
import pytest

from expfam import (
    GammaFamily,
    GaussianLocationFamily,
    InverseGaussianFamily,
    PoissonExponentialFamily,
)
from expfam.core import TAU, integrate_over_natural
from expfam.distributions import GammaPosterior
from expfam.errors import DomainError
from expfam.saddlepoint import (
    exactness_report,
    renormalize,
    saddlepoint_unnormalized,
)


class TestUnnormalizedProfile:
    def test_at_the_estimate(self):
        for family, theta_hat in (
            (GammaFamily(1.0), -1.0),
            (GaussianLocationFamily(1.0), 0.3),
            (PoissonExponentialFamily(2.0), -1.5),
        ):
            value = saddlepoint_unnormalized(family, 3, theta_hat, theta_hat)
            expected = family.jeffreys_unnormalized(theta_hat) / math.sqrt(TAU)
            assert value == pytest.approx(expected, rel=1e-12)

    def test_gaussian_unit_shift(self):
        family = GaussianLocationFamily(1.0)
        value = saddlepoint_unnormalized(family, 1, 0.0, 1.0)
        assert value == pytest.approx(math.exp(-0.5) / math.sqrt(TAU), rel=1e-12)

    def test_gamma_audited_composition(self):
        # exp(-2 (2 - 1 - ln 2)) * (1/2) / sqrt(tau) at beta = 2, beta_hat = 1
        family = GammaFamily(1.0)
        value = saddlepoint_unnormalized(family, 2, -1.0, -2.0)
        expected = math.exp(-2.0 * (1.0 - math.log(2.0))) * 0.5 / math.sqrt(TAU)
        assert value == pytest.approx(expected, rel=1e-12)

    def test_invalid_n(self):
        with pytest.raises(DomainError):
            saddlepoint_unnormalized(GammaFamily(1.0), 0, -1.0, -1.0)


class TestRenormalize:
    def test_gaussian_normalizer_closed_form(self):
        family = GaussianLocationFamily(1.0)
        for n in (1, 2, 4):
            profile = renormalize(family, n, 0.7, tol=1e-11)
            assert profile.normalizer == pytest.approx(n**-0.5, abs=1e-10)
            assert profile.normalizer_error <= 1e-11

    def test_gamma_profile_is_gamma_density(self):
        # alpha=1, n=2, beta_hat=1: the profile reduces to Gamma(2, 2) in beta
        family = GammaFamily(1.0)
        profile = renormalize(family, 2, -1.0, tol=1e-11)
        oracle = GammaPosterior(2.0, 2.0)
        for beta in np.geomspace(0.1, 6.0, 30):
            assert profile.density(-beta) == pytest.approx(
                oracle.pdf(beta), rel=1e-9
            )

    def test_profile_reintegrates_to_one(self):
        for family, theta_hat in (
            (GammaFamily(1.0), -1.0),
            (PoissonExponentialFamily(2.0), -0.7),
            (InverseGaussianFamily(2.0), -1.2),
            (GaussianLocationFamily(1.0), 0.0),
        ):
            tol = 1e-10
            profile = renormalize(family, 3, theta_hat, tol=tol)
            mass = integrate_over_natural(
                family, profile.density, tol=tol, split_thetas=[theta_hat]
            )
            assert mass.value == pytest.approx(1.0, abs=2.0 * tol + 1e-10)

    def test_variance_decreases_with_n(self):
        # monotone concentration of the renormalized profile
        for family, theta_hat in (
            (GammaFamily(1.0), -1.0),
            (GaussianLocationFamily(1.0), 0.5),
            (PoissonExponentialFamily(2.0), -1.0),
        ):
            variances = []
            for n in (1, 2, 4, 8):
                profile = renormalize(family, n, theta_hat, tol=1e-11)
                mean = integrate_over_natural(
                    family,
                    lambda t: t * profile.density(t),
                    tol=1e-10,
                    split_thetas=[theta_hat],
                ).value
                second = integrate_over_natural(
                    family,
                    lambda t: t * t * profile.density(t),
                    tol=1e-10,
                    split_thetas=[theta_hat],
                ).value
                variances.append(second - mean * mean)
            assert all(a > b for a, b in zip(variances, variances[1:])), family


class TestExactness:
    def test_gamma(self):
        family = GammaFamily(1.0)
        grid = [-0.3, -1.0, -2.0, -4.0]
        assert exactness_report(family, 3, family.mle(1.0), grid, tol=1e-11) <= 1e-7

    def test_gaussian(self):
        family = GaussianLocationFamily(1.0)
        grid = [-1.0, 0.0, 0.7, 2.0]
        assert exactness_report(family, 2, 0.7, grid, tol=1e-11) <= 1e-9

    def test_poisson_exponential(self):
        family = PoissonExponentialFamily(2.0)
        grid = [-0.4, -1.0, -1.8, -3.0]
        assert exactness_report(family, 2, family.mle(1.0), grid, tol=1e-11) <= 1e-7

    def test_three_by_three_grids(self):
        cases = (
            (GammaFamily(1.0), (0.5, 1.0, 2.0)),
            (GaussianLocationFamily(1.0), (-1.0, 0.5, 2.0)),
            (PoissonExponentialFamily(2.0), (0.5, 1.0, 2.0)),
        )
        for family, means in cases:
            for n in (1, 2, 4):
                for xbar in means:
                    theta_hat = family.mle(xbar)
                    grid = [theta_hat * s for s in (0.5, 1.0, 2.0)] if not isinstance(
                        family, GaussianLocationFamily
                    ) else [theta_hat - 1.0, theta_hat, theta_hat + 1.0]
                    assert (
                        exactness_report(family, n, theta_hat, grid, tol=1e-11)
                        <= 1e-6
                    ), (family, n, xbar)

    def test_inverse_gaussian_has_no_closed_form_posterior(self):
        family = InverseGaussianFamily(2.0)
        with pytest.raises(DomainError):
            exactness_report(family, 2, -1.0, [-1.0], tol=1e-10)
