"""
Spectrum denominator of a three-antenna array serving two users.

With N = 3 and K = 2 the noise subspace is one vector u = [u_1, u_2, u_3]ᵀ
and, with r̄_0 = sqrt(r² + d² + 2rd·sinθ) and r̄_2 = sqrt(r² + d² - 2rd·sinθ),

    1/S = Σ|u_i|² + 2|u_1||u_2|·cos(2π/λ_c·(r - r̄_0) + φ_2 - φ_1)
                 + 2|u_1||u_3|·cos(2π/λ_c·(r̄_2 - r̄_0) + φ_3 - φ_1)
                 + 2|u_2||u_3|·cos(2π/λ_c·(r̄_2 - r) + φ_3 - φ_2)

Σ|u_i|² equals 1 for a unit-norm eigenvector.
"""
import math

import numpy as np
from scipy import signal

from pynearfield.core.geometry import CarrierConfig
from .two_antenna import NoiseVectorPhases, _require_size


def _excess(r: np.ndarray, d: float, sign: float, sin_theta: float) -> np.ndarray:
    # r̄ - r = (d² ± 2rd·sinθ)/(r̄ + r)
    numerator = d ** 2 + sign * 2.0 * r * d * sin_theta
    return numerator / (np.sqrt(r ** 2 + numerator) + r)


def denom_three_antenna(
    phases: NoiseVectorPhases,
    r,
    theta: float,
    d: float,
    carrier: CarrierConfig
):
    """Spectrum denominator 1/S(r, θ) of the three-antenna array. `r` may be
    an array.
    """
    _require_size(phases, 3)
    (m1, m2, m3), (p1, p2, p3) = phases.magnitudes, phases.phases
    r = np.asarray(r, dtype=float)
    k = carrier.wavenumber
    sin_theta = math.sin(theta)
    excess_0 = _excess(r, d, +1.0, sin_theta)
    excess_2 = _excess(r, d, -1.0, sin_theta)
    value = (
        m1 ** 2 + m2 ** 2 + m3 ** 2
        + 2.0 * m1 * m2 * np.cos(-k * excess_0 + p2 - p1)
        + 2.0 * m1 * m3 * np.cos(k * (excess_2 - excess_0) + p3 - p1)
        + 2.0 * m2 * m3 * np.cos(k * excess_2 + p3 - p2)
    )
    return float(value) if np.ndim(value) == 0 else value


def local_minima(values: np.ndarray) -> np.ndarray:
    """Indices of the strict interior local minima of a 1-D profile."""
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        return np.array([], dtype=int)
    inner = (values[1:-1] < values[:-2]) & (values[1:-1] < values[2:])
    return np.flatnonzero(inner) + 1


def _log_prominences(values: np.ndarray, indices: np.ndarray) -> np.ndarray:
    # Minima of the profile are peaks of -log(profile); their prominence is
    # the log of the depth ratio.
    depth = -np.log(np.maximum(values, np.finfo(float).tiny))
    return signal.peak_prominences(depth, indices)[0]


def minimum_prominence(values: np.ndarray, index: int) -> float:
    """Ratio of the lower of the two enclosing maxima to the minimum at
    `index`. On each side the enclosing maximum is the largest value before
    a deeper minimum (or the end of the profile).
    """
    values = np.asarray(values, dtype=float)
    if values[index] <= 0.0:
        return math.inf
    return float(np.exp(_log_prominences(values, np.array([index]))[0]))


def deepest_minima(values: np.ndarray, count: int, min_prominence: float = 1.0) -> np.ndarray:
    """Indices of the `count` deepest strict local minima whose prominence is
    at least `min_prominence`, deepest first.
    """
    values = np.asarray(values, dtype=float)
    minima = local_minima(values)
    if min_prominence > 1.0 and minima.size:
        minima = minima[_log_prominences(values, minima) >= math.log(min_prominence)]
    order = np.argsort(values[minima], kind="stable")
    return minima[order[:count]]
