"""
Carrier and array geometry, per-element distances and near-field steering
vectors of a uniform linear array (ULA).

Angles are in radians and measured from the array broadside. Distances are in
meters and measured from the array center.
"""
from dataclasses import dataclass
import math

import numpy as np

from .exceptions import ConfigurationError


SPEED_OF_LIGHT = 299_792_458.0  # m/s

# A steering vector is a complex numpy array of length N with unit-modulus
# entries.
SteeringVector = np.ndarray


@dataclass(frozen=True)
class CarrierConfig:
    """
    Carrier of the system.

    Attributes
    ----------
    fc: float
        Carrier frequency in Hz. The wavelength is derived from it and never
        stored.
    """
    fc: float

    def __post_init__(self) -> None:
        if not (self.fc > 0 and math.isfinite(self.fc)):
            raise ConfigurationError(f"carrier frequency must be positive, got {self.fc}")

    @classmethod
    def from_ghz(cls, fc_ghz: float) -> "CarrierConfig":
        return cls(fc_ghz * 1e9)

    @property
    def lambda_c(self) -> float:
        """Wavelength in meters."""
        return SPEED_OF_LIGHT / self.fc

    @property
    def wavenumber(self) -> float:
        """Returns 2π/λ_c in rad/m."""
        return 2.0 * math.pi / self.lambda_c


@dataclass(frozen=True)
class UlaGeometry:
    """
    Uniform linear array centered at the origin.

    Attributes
    ----------
    n_antennas: int
        Number of antennas N.
    spacing: float
        Antenna spacing d in meters.
    """
    n_antennas: int
    spacing: float

    def __post_init__(self) -> None:
        if int(self.n_antennas) != self.n_antennas or self.n_antennas < 1:
            raise ConfigurationError(f"number of antennas must be a positive integer, got {self.n_antennas}")
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise ConfigurationError(f"antenna spacing must be positive, got {self.spacing}")

    @classmethod
    def from_wavelengths(
        cls,
        n_antennas: int,
        spacing_wavelengths: float,
        carrier: CarrierConfig
    ) -> "UlaGeometry":
        """Creates a ULA whose spacing is given in multiples of λ_c."""
        return cls(n_antennas, spacing_wavelengths * carrier.lambda_c)

    @property
    def aperture(self) -> float:
        """Array length D = (N - 1)·d in meters."""
        return (self.n_antennas - 1) * self.spacing

    @property
    def offsets(self) -> np.ndarray:
        """Element offsets δ_n = (2n - N + 1)/2 for n = 0..N-1, in units of d."""
        n = np.arange(self.n_antennas, dtype=float)
        return (2.0 * n - self.n_antennas + 1.0) / 2.0


@dataclass(frozen=True)
class PolarLocation:
    """
    Location of a source (user or cluster) relative to the array center.

    Attributes
    ----------
    r: float
        Distance from the array center in meters.
    theta: float
        Angle from broadside in radians, within [-π/2, π/2].
    """
    r: float
    theta: float

    def __post_init__(self) -> None:
        if not (self.r > 0 and math.isfinite(self.r)):
            raise ConfigurationError(f"distance must be positive, got {self.r}")
        if not (-math.pi / 2 - 1e-12 <= self.theta <= math.pi / 2 + 1e-12):
            raise ConfigurationError(f"angle must lie in [-pi/2, pi/2], got {self.theta}")

    @classmethod
    def from_degrees(cls, r: float, theta_deg: float) -> "PolarLocation":
        return cls(r, math.radians(theta_deg))

    @property
    def theta_deg(self) -> float:
        return math.degrees(self.theta)


def fraunhofer_distance(geom: UlaGeometry, carrier: CarrierConfig) -> float:
    """Returns the Fraunhofer distance R_F = 2D²/λ_c in meters."""
    return 2.0 * geom.aperture ** 2 / carrier.lambda_c


def _path_excess(r: np.ndarray, theta: np.ndarray, offsets_m: np.ndarray) -> np.ndarray:
    # r̄_n - r written as (δ²d² - 2rδd·sinθ)/(r̄_n + r): no cancellation for r >> δd.
    r = np.asarray(r, dtype=float)[..., np.newaxis]
    sin_theta = np.sin(np.asarray(theta, dtype=float))[..., np.newaxis]
    numerator = offsets_m ** 2 - 2.0 * r * offsets_m * sin_theta
    r_bar = np.sqrt(r ** 2 + numerator)
    return numerator / (r_bar + r)


def element_distance(loc: PolarLocation, geom: UlaGeometry, n: int) -> float:
    """Returns the distance r̄_n between the source and antenna `n`.

    r̄_n = sqrt(r² + δ_n²d² - 2rδ_n·d·sinθ)

    Raises
    ------
    ConfigurationError
        If `n` is not a valid antenna index.
    """
    if not 0 <= n < geom.n_antennas:
        raise ConfigurationError(f"antenna index {n} out of range [0, {geom.n_antennas})")
    delta_d = geom.offsets[n] * geom.spacing
    return math.sqrt(
        loc.r ** 2 + delta_d ** 2 - 2.0 * loc.r * delta_d * math.sin(loc.theta)
    )


def element_distances(loc: PolarLocation, geom: UlaGeometry) -> np.ndarray:
    """Returns the distances r̄_0 .. r̄_{N-1} of all antennas."""
    return loc.r + _path_excess(loc.r, loc.theta, geom.offsets * geom.spacing)


def steering_vector(
    carrier: CarrierConfig,
    loc: PolarLocation,
    geom: UlaGeometry
) -> SteeringVector:
    """Returns the near-field steering vector b(fc, r, θ).

    Entry n equals exp(-j·(2π/λ_c)·(r̄_n - r)).
    """
    excess = _path_excess(loc.r, loc.theta, geom.offsets * geom.spacing)
    return np.exp(-1j * carrier.wavenumber * excess)


def steering_matrix(
    carrier: CarrierConfig,
    r_values: np.ndarray,
    theta_values: np.ndarray,
    geom: UlaGeometry
) -> np.ndarray:
    """Returns the steering vectors of every (r, θ) pair of a grid.

    Parameters
    ----------
    r_values : np.ndarray
        Distances, shape (R,).
    theta_values : np.ndarray
        Angles in radians, shape (A,).

    Returns
    -------
    np.ndarray
        Complex array of shape (R, A, N); entry [i, j] equals
        `steering_vector(carrier, PolarLocation(r_values[i], theta_values[j]), geom)`.
    """
    r_grid, theta_grid = np.meshgrid(
        np.asarray(r_values, dtype=float),
        np.asarray(theta_values, dtype=float),
        indexing="ij"
    )
    excess = _path_excess(r_grid, theta_grid, geom.offsets * geom.spacing)
    return np.exp(-1j * carrier.wavenumber * excess)


def far_field_steering_vector(
    carrier: CarrierConfig,
    theta: float,
    geom: UlaGeometry
) -> SteeringVector:
    """Plane-wave limit of `steering_vector` for r → ∞:
    exp(+j·2π·δ_n·d·sinθ/λ_c).
    """
    return np.exp(1j * carrier.wavenumber * geom.offsets * geom.spacing * math.sin(theta))
