from dataclasses import dataclass
import math

import numpy as np
from scipy import stats

from pynearfield.core.exceptions import ConfigurationError


@dataclass(frozen=True)
class GammaFit:
    """
    Gamma model G(μ, ν) of the distance estimates.

    Attributes
    ----------
    shape: float
        Shape parameter μ.
    scale: float
        Scale parameter ν.
    """
    shape: float
    scale: float

    def __post_init__(self) -> None:
        if not (self.shape > 0 and self.scale > 0):
            raise ConfigurationError("Gamma shape and scale must be positive")

    @property
    def mean(self) -> float:
        return self.shape * self.scale

    @property
    def variance(self) -> float:
        return self.shape * self.scale ** 2

    def pdf(self, x: np.ndarray) -> np.ndarray:
        return stats.gamma.pdf(x, a=self.shape, scale=self.scale)

    def histogram(self, samples: np.ndarray, bins: int = 50) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Returns (bin centers, empirical density, fitted density)."""
        density, edges = np.histogram(samples, bins=bins, density=True)
        centers = (edges[:-1] + edges[1:]) / 2
        return centers, density, self.pdf(centers)


@dataclass(frozen=True)
class PowerLawFit:
    """
    Variance law ζ²(r) ≈ η·r^p.

    Attributes
    ----------
    eta: float
        Coefficient η of the fit with the exponent fixed at 4.
    exponent: float
        Exponent p of the free least-squares fit (diagnostic).
    eta_free: float
        Coefficient of the free fit.
    """
    eta: float
    exponent: float
    eta_free: float

    def predict(self, r: np.ndarray) -> np.ndarray:
        return self.eta * np.asarray(r, dtype=float) ** 4


def gamma_fit(samples) -> GammaFit:
    """Method-of-moments Gamma fit: μ = mean²/variance, ν = variance/mean.
    The population variance (ddof = 0) is used, so the fitted mean and
    variance reproduce the sample moments.

    Raises
    ------
    ConfigurationError
        Fewer than two samples, nonpositive samples, or a variance below
        the floating-point resolution of the mean.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 2:
        raise ConfigurationError("a Gamma fit needs at least two samples")
    if np.any(x <= 0) or not np.all(np.isfinite(x)):
        raise ConfigurationError("Gamma fit samples must be positive and finite")
    mean = float(np.mean(x))
    variance = float(np.var(x))
    if variance <= (1e-12 * mean) ** 2:
        raise ConfigurationError("Gamma fit samples have zero variance")
    return GammaFit(mean ** 2 / variance, variance / mean)


def variance_power_law_fit(r_values, variances) -> PowerLawFit:
    """Least squares of log ζ² on log r.

    The free fit gives the exponent; η comes from the fit with the exponent
    fixed at 4, i.e. log η = mean(log ζ² - 4·log r).

    Raises
    ------
    ConfigurationError
        Fewer than two points or nonpositive inputs.
    """
    r = np.asarray(r_values, dtype=float)
    v = np.asarray(variances, dtype=float)
    if r.size < 2 or r.size != v.size:
        raise ConfigurationError("a power-law fit needs at least two (r, variance) pairs")
    if np.any(r <= 0) or np.any(v <= 0):
        raise ConfigurationError("power-law fit inputs must be positive")
    log_r, log_v = np.log(r), np.log(v)
    exponent, intercept = np.polyfit(log_r, log_v, 1)
    eta = math.exp(float(np.mean(log_v - 4.0 * log_r)))
    return PowerLawFit(eta, float(exponent), math.exp(float(intercept)))
