import numpy as np
import pytest
from scipy import stats

from pynearfield.analysis import GammaFit, gamma_fit, variance_power_law_fit
from pynearfield.core.exceptions import ConfigurationError


def test_gamma_fit_reproduces_sample_moments(rng):
    samples = rng.gamma(shape=40.0, scale=0.4, size=2000)
    fit = gamma_fit(samples)
    assert fit.mean == pytest.approx(np.mean(samples), rel=1e-10)
    assert fit.variance == pytest.approx(np.var(samples), rel=1e-10)


def test_gamma_fit_matches_distribution(rng):
    samples = rng.gamma(shape=12.0, scale=2.0, size=5000)
    fit = gamma_fit(samples)
    assert fit.shape == pytest.approx(12.0, rel=0.1)
    assert fit.scale == pytest.approx(2.0, rel=0.1)
    result = stats.kstest(samples, "gamma", args=(fit.shape, 0.0, fit.scale))
    assert result.pvalue > 0.01


def test_gamma_histogram_is_a_density(rng):
    samples = rng.gamma(shape=5.0, scale=1.0, size=3000)
    fit = gamma_fit(samples)
    centers, density, fitted = fit.histogram(samples, bins=40)
    width = centers[1] - centers[0]
    assert np.sum(density) * width == pytest.approx(1.0)
    assert np.sum(fitted) * width == pytest.approx(1.0, abs=0.05)
    assert np.all(fit.pdf(centers) >= 0)


@pytest.mark.parametrize("samples", [[1.0], [1.0, -1.0], [2.0, 2.0, 2.0]])
def test_gamma_fit_rejects_degenerate_samples(samples):
    with pytest.raises(ConfigurationError):
        gamma_fit(samples)


def test_gamma_parameters_must_be_positive():
    with pytest.raises(ConfigurationError):
        GammaFit(0.0, 1.0)


def test_exact_quartic_law():
    r = np.array([0.2, 0.4, 0.6, 0.8, 1.0])
    fit = variance_power_law_fit(r, 0.0011 * r ** 4)
    assert fit.exponent == pytest.approx(4.0)
    assert fit.eta == pytest.approx(0.0011)
    assert fit.eta_free == pytest.approx(0.0011)
    assert fit.predict(2.0) == pytest.approx(0.0011 * 16)


def test_fixed_exponent_coefficient_on_other_law():
    r = np.array([1.0, 2.0])
    fit = variance_power_law_fit(r, 3.0 * r ** 2)
    assert fit.exponent == pytest.approx(2.0)
    # log η = mean(log 3 + 2 log r - 4 log r) = log 3 - log 2
    assert fit.eta == pytest.approx(1.5)


def test_power_law_fit_rejects_bad_input():
    with pytest.raises(ConfigurationError):
        variance_power_law_fit([1.0], [1.0])
    with pytest.raises(ConfigurationError):
        variance_power_law_fit([1.0, 2.0], [0.0, 1.0])
