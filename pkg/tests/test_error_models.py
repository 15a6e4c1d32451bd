"""Range-error models: sampling, densities and their closed forms."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from lateration import (GammaErrorModel, MixtureErrorModel, NormalErrorModel, gamma_pdf,
                        normal_logpdf, sample_range, sample_ranges)
from lateration.error_models import sample_mixture_errors


class TestMixtureSampling:
    def test_zero_variance_is_deterministic(self):
        model = MixtureErrorModel(bias=0.05, sigma=0, nlos_prob=0, nlos_rate=2)
        assert sample_range(10, model, np.random.default_rng(0)) == pytest.approx(10.05, abs=1e-15)

    def test_always_nlos_mean(self):
        # mean of Exponential(rate 2) is 1/2
        model = MixtureErrorModel(bias=0, sigma=0, nlos_prob=1, nlos_rate=2)
        r = sample_ranges(np.full(100_000, 10.0), model, np.random.default_rng(1))
        assert r.mean() == pytest.approx(10.5, abs=0.01)

    def test_same_seed_same_draws(self):
        model = MixtureErrorModel(0.05, 0.015, 0.1, 2.0)
        a = sample_range(3.0, model, np.random.default_rng(7))
        b = sample_range(3.0, model, np.random.default_rng(7))
        assert a == b

    def test_clamped_at_zero(self):
        model = MixtureErrorModel(bias=-5, sigma=0)
        assert sample_range(1.0, model, np.random.default_rng(0)) == 0.0

    def test_moments_match_closed_form(self):
        model = MixtureErrorModel(0.05, 0.015, 0.1, 2.0, nlos_unit=0.05)
        e = sample_mixture_errors(model, 400_000, seed=3)
        assert e.mean() == pytest.approx(model.mean, abs=3 * math.sqrt(model.variance / e.size))
        assert e.var() == pytest.approx(model.variance, rel=0.02)

    @pytest.mark.parametrize("kw", [dict(sigma=-1), dict(nlos_prob=1.5), dict(nlos_rate=0)])
    def test_invalid_parameters(self, kw):
        with pytest.raises(ValueError):
            MixtureErrorModel(**kw)


class TestGammaPdf:
    def test_exponential_special_case(self):
        assert gamma_pdf(0.0, GammaErrorModel(1, 2)) == 2.0

    def test_hand_value(self):
        # x * exp(-x) at x = 1
        assert gamma_pdf(1.0, GammaErrorModel(2, 1)) == pytest.approx(math.exp(-1), abs=1e-15)

    def test_below_support(self):
        assert gamma_pdf(-5.0, GammaErrorModel(3.3, 0.58, -3.31)) == 0.0

    def test_matches_scipy(self):
        m = GammaErrorModel(3.3, 0.58, -3.31)
        x = np.linspace(-4, 30, 200)
        ref = stats.gamma.pdf(x, a=m.alpha, loc=m.location, scale=1 / m.beta)
        np.testing.assert_allclose(gamma_pdf(x, m), ref, rtol=1e-12, atol=1e-300)

    @pytest.mark.parametrize("alpha,expected", [(2.0, 0.0), (1.0, 0.7), (0.5, math.inf)])
    def test_value_at_location(self, alpha, expected):
        assert gamma_pdf(1.0, GammaErrorModel(alpha, 0.7, 1.0)) == expected

    def test_integrates_to_one(self):
        m = GammaErrorModel(3.3, 0.58, -3.31)
        total, _ = integrate.quad(lambda x: gamma_pdf(x, m), m.location, math.inf)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_mode(self):
        m = GammaErrorModel(3.3, 0.58, -3.31)
        x = np.linspace(m.location, m.location + 20, 200_001)
        assert x[np.argmax(gamma_pdf(x, m))] == pytest.approx(m.mode, abs=1e-3)

    def test_invalid(self):
        with pytest.raises(ValueError):
            GammaErrorModel(0, 1)


class TestNormalLogpdf:
    def test_at_mean(self):
        assert normal_logpdf(0.0, NormalErrorModel(0, 1)) == pytest.approx(-0.9189385332046727, abs=1e-15)

    def test_one_sigma_offset(self):
        m = NormalErrorModel(1.5, 2.0)
        assert normal_logpdf(3.5, m) == pytest.approx(normal_logpdf(1.5, m) - 0.5, abs=1e-14)

    def test_fitted_parameters(self):
        # -ln(3.57) - ln(2 pi)/2
        value = normal_logpdf(2.43, NormalErrorModel(2.43, 3.57))
        assert value == pytest.approx(-2.1915042, abs=1e-6)
        assert value == pytest.approx(stats.norm.logpdf(2.43, 2.43, 3.57), abs=1e-14)

    def test_invalid_sigma(self):
        with pytest.raises(ValueError):
            NormalErrorModel(0, 0)
