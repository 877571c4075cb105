"""
Distance estimation with two antennas and one user.

With N = 2 and K = 1 the noise subspace is a single vector u = [u_1, u_2]ᵀ and
the spectrum denominator reduces to

    1/S = |u_1|² + |u_2|² + 2|u_1||u_2|·cos(2π/λ_c·(r̄_0 - r̄_1) + φ_1 - φ_2)

Its minima satisfy 2π/λ_c·(r̄_0 - r̄_1) + φ_1 - φ_2 = (2M+1)π, which, squared
twice, gives the closed-form distance of `closed_form_distance_n2` for each
integer M.
"""
from dataclasses import dataclass
import logging
import math

import numpy as np

from pynearfield.core.exceptions import ConfigurationError, InvalidMError
from pynearfield.core.geometry import CarrierConfig


logger = logging.getLogger(__name__)

DEFAULT_SEARCH_WIDTH = 8


@dataclass(frozen=True)
class NoiseVectorPhases:
    """
    Magnitudes |u_i| and phases φ_i (in (-π, π]) of a noise eigenvector.

    Attributes
    ----------
    magnitudes: tuple[float, ...]
    phases: tuple[float, ...]
    """
    magnitudes: tuple[float, ...]
    phases: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.magnitudes) != len(self.phases):
            raise ConfigurationError("magnitudes and phases must have the same length")
        if any(m < 0 for m in self.magnitudes):
            raise ConfigurationError("magnitudes must be non-negative")

    @classmethod
    def from_vector(cls, u: np.ndarray) -> "NoiseVectorPhases":
        u = np.asarray(u, dtype=complex).ravel()
        return cls(tuple(float(m) for m in np.abs(u)), tuple(float(p) for p in np.angle(u)))

    @property
    def size(self) -> int:
        return len(self.magnitudes)

    def as_vector(self) -> np.ndarray:
        return np.asarray(self.magnitudes) * np.exp(1j * np.asarray(self.phases))


def _require_size(phases: NoiseVectorPhases, n: int) -> None:
    if phases.size != n:
        raise ConfigurationError(f"expected a noise vector with {n} entries, got {phases.size}")


def path_difference_n2(r, theta: float, d: float) -> np.ndarray:
    """Returns r̄_0 - r̄_1 for the two-antenna array, with
    r̄_0 = sqrt(r² + d²/4 + rd·sinθ) and r̄_1 = sqrt(r² + d²/4 - rd·sinθ).
    """
    r = np.asarray(r, dtype=float)
    cross = r * d * math.sin(theta)
    r_bar_0 = np.sqrt(r ** 2 + d ** 2 / 4 + cross)
    r_bar_1 = np.sqrt(r ** 2 + d ** 2 / 4 - cross)
    return 2.0 * cross / (r_bar_0 + r_bar_1)


def denom_two_antenna(
    phases: NoiseVectorPhases,
    r,
    theta: float,
    d: float,
    carrier: CarrierConfig
):
    """Spectrum denominator 1/S(r, θ) of the two-antenna array. `r` may be
    an array.
    """
    _require_size(phases, 2)
    (m1, m2), (p1, p2) = phases.magnitudes, phases.phases
    argument = carrier.wavenumber * path_difference_n2(r, theta, d) + p1 - p2
    value = m1 ** 2 + m2 ** 2 + 2.0 * m1 * m2 * np.cos(argument)
    return float(value) if np.ndim(value) == 0 else value


def psi(phases: NoiseVectorPhases, carrier: CarrierConfig, m: int) -> float:
    """Ψ = λ_c/(2π)·((2M+1)π - φ_1 + φ_2), with φ_2 - φ_1 taken in (0, 2π]."""
    _require_size(phases, 2)
    p1, p2 = phases.phases
    delta = (p2 - p1) % (2.0 * math.pi)
    if delta == 0.0:
        delta = 2.0 * math.pi
    return carrier.lambda_c / (2.0 * math.pi) * ((2 * m + 1) * math.pi + delta)


def kappa(phases: NoiseVectorPhases, d: float, carrier: CarrierConfig, m: int) -> float:
    """κ(φ_1, φ_2) = d²/2 - Ψ²."""
    return d ** 2 / 2 - psi(phases, carrier, m) ** 2


def closed_form_distance_n2(
    phases: NoiseVectorPhases,
    theta: float,
    d: float,
    carrier: CarrierConfig,
    m: int
) -> float:
    """Closed-form distance estimate for a given M:

        r̂² = (d⁴/4 - κ²) / (4κ - 2d² + 4d²·sin²θ)

    evaluated in the equivalent factored form
    Ψ²(d² - Ψ²) / (4(d²·sin²θ - Ψ²)).

    Squaring twice admits two kinds of roots. For |Ψ| < d·|sinθ| the path
    difference r̄_0 - r̄_1 at r̂ equals ±Ψ; for |Ψ| > d it is the sum
    r̄_0 + r̄_1 that equals |Ψ|, and r̂ is in general not a minimum of the
    spectrum denominator.

    Raises
    ------
    InvalidMError
        If the right-hand side is not a positive finite number.
    """
    p = psi(phases, carrier, m)
    numerator = p ** 2 * (d ** 2 - p ** 2)
    denominator = 4.0 * (d ** 2 * math.sin(theta) ** 2 - p ** 2)
    if denominator == 0.0:
        raise InvalidMError(f"no valid distance for M = {m}: vanishing denominator")
    radicand = numerator / denominator
    if not (radicand > 0 and math.isfinite(radicand)):
        raise InvalidMError(f"no valid distance for M = {m} (radicand {radicand:.3e})")
    return math.sqrt(radicand)


def m_lower_bound(d: float, carrier: CarrierConfig) -> int:
    """Smallest integer M ≥ d/λ_c - 1, clamped at 0."""
    if not d > 0:
        raise ConfigurationError(f"antenna spacing must be positive, got {d}")
    # The tolerance absorbs rounding of spacings given as exact multiples of λ_c.
    return max(0, math.ceil(d / carrier.lambda_c - 1.0 - 1e-9))


def path_difference_m_range(phases: NoiseVectorPhases, theta: float, d: float, carrier: CarrierConfig) -> range:
    """The M whose Ψ lies strictly inside (-d·|sinθ|, d·|sinθ|), i.e. can be a
    path difference r̄_0 - r̄_1. Empty at θ = 0.
    """
    # Ψ/λ_c = M + 1/2 + offset with offset in (0, 1]
    offset = psi(phases, carrier, 0) / carrier.lambda_c - 0.5
    limit = d * abs(math.sin(theta)) / carrier.lambda_c
    low = math.floor(-limit - 0.5 - offset) + 1
    high = math.ceil(limit - 0.5 - offset) - 1
    return range(low, high + 1)


def select_m(
    phases: NoiseVectorPhases,
    theta: float,
    d: float,
    carrier: CarrierConfig,
    search_width: int = DEFAULT_SEARCH_WIDTH,
    m_min: int | None = None,
    r_hint: float | None = None
) -> tuple[int, float]:
    """Chooses M and the corresponding closed-form distance.

    With `m_min` given, the candidates are M = m_min, …, m_min + search_width - 1.
    Otherwise they are the `search_width` values starting at `m_lower_bound`
    together with `path_difference_m_range`. Invalid candidates are skipped.
    The candidate whose distance attains the smallest denominator wins.
    Candidates whose denominators are equal to within 1e-9·‖u‖² are ties
    (the aliased minima of the spectrum): the one closest to `r_hint` is
    returned, or the farthest one without a hint.

    Raises
    ------
    ConfigurationError
        If `search_width` < 1.
    InvalidMError
        If every candidate is invalid.
    """
    if search_width < 1:
        raise ConfigurationError(f"search width must be at least 1, got {search_width}")
    if m_min is None:
        start = m_lower_bound(d, carrier)
        physical = path_difference_m_range(phases, theta, d, carrier)
        window = sorted(set(range(start, start + search_width)) | set(physical))
    else:
        window = list(range(m_min, m_min + search_width))
    candidates: list[tuple[int, float, float]] = []
    for m in window:
        try:
            r_hat = closed_form_distance_n2(phases, theta, d, carrier, m)
        except InvalidMError:
            continue
        candidates.append((m, r_hat, denom_two_antenna(phases, r_hat, theta, d, carrier)))
    if not candidates:
        raise InvalidMError(f"no valid distance for M in [{window[0]}, {window[-1]}]")
    best = min(value for _, _, value in candidates)
    tolerance = 1e-9 * sum(m ** 2 for m in phases.magnitudes)
    ties = [c for c in candidates if c[2] <= best + tolerance]
    if r_hint is not None:
        m, r_hat, _ = min(ties, key=lambda c: abs(c[1] - r_hint))
    else:
        m, r_hat, _ = max(ties, key=lambda c: c[1])
    return m, r_hat


def brute_force_distance(
    phases: NoiseVectorPhases,
    theta: float,
    d: float,
    carrier: CarrierConfig,
    r_values: np.ndarray
) -> float | None:
    """Distance of `r_values` minimizing the denominator, or None when the
    denominator does not vary along `r_values` (θ = 0).
    """
    values = denom_two_antenna(phases, np.asarray(r_values, dtype=float), theta, d, carrier)
    if np.ptp(values) <= 1e-9 * sum(m ** 2 for m in phases.magnitudes):
        return None
    return float(r_values[int(np.argmin(values))])
