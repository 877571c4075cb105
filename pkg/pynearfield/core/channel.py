"""
Near-field LoS + clustered NLoS channel with a frequency-dependent reflection
coefficient.

The channel of user k is

    h_k = (λ_c/(4π r_k))·exp(-j2π r_k/λ_c)·b(r_k, θ_k) + Σ_ℓ g_{k,ℓ}·b(r_ℓ, θ_ℓ)

with g_{k,ℓ} ~ CN(0, γ_ℓ²) and γ_ℓ² = (λ_c/(4π r_ℓ))²·α_ℓ(fc). The L clusters
are shared by all users; only the fading coefficients differ per user.
"""
from dataclasses import dataclass, field, replace
import logging
import math

import numpy as np

from .exceptions import ConfigurationError, NumericalError
from .geometry import CarrierConfig, UlaGeometry, PolarLocation, steering_vector
from .rng import complex_normal


logger = logging.getLogger(__name__)

# Linear fit of measured reflection loss (rough mortar), in dB versus GHz.
REFLECTION_SLOPE_DB_PER_GHZ = -0.0094
REFLECTION_INTERCEPT_DB = -8.18

# Clusters are never placed closer than this many wavelengths to the array.
CLUSTER_MIN_DISTANCE_WAVELENGTHS = 10.0


def reflection_coefficient_db(fc: float) -> float:
    """Returns the reflection coefficient α(fc) in dB:
    -0.0094·(fc/10⁹) - 8.18.
    """
    if not fc > 0:
        raise ConfigurationError(f"carrier frequency must be positive, got {fc}")
    return REFLECTION_SLOPE_DB_PER_GHZ * (fc / 1e9) + REFLECTION_INTERCEPT_DB


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def los_amplitude(r: float, carrier: CarrierConfig) -> float:
    """Free-space amplitude λ_c/(4π r) of a path of length `r`."""
    return carrier.lambda_c / (4.0 * math.pi * r)


@dataclass(frozen=True)
class Cluster:
    """
    Cluster of scatterers producing one NLoS path.

    Attributes
    ----------
    location: PolarLocation
        Position (r_ℓ, θ_ℓ) of the cluster.
    reflection_db: float
        Reflection coefficient α_ℓ(fc) in dB (≤ 0).
    large_scale_gamma_sq: float
        Variance γ_ℓ² of the fading coefficients of the path (linear).
    """
    location: PolarLocation
    reflection_db: float
    large_scale_gamma_sq: float

    @classmethod
    def at(
        cls,
        location: PolarLocation,
        carrier: CarrierConfig,
        perfect_reflection: bool = False
    ) -> "Cluster":
        """Creates the cluster at `location` with the reflection coefficient
        of `carrier`. With `perfect_reflection` α_ℓ = 1 (0 dB).
        """
        alpha_db = 0.0 if perfect_reflection else reflection_coefficient_db(carrier.fc)
        gamma_sq = los_amplitude(location.r, carrier) ** 2 * db_to_linear(alpha_db)
        return cls(location, alpha_db, gamma_sq)

    @property
    def reflection_linear(self) -> float:
        return db_to_linear(self.reflection_db)


def draw_clusters(
    count: int,
    users: list[PolarLocation],
    carrier: CarrierConfig,
    rng: np.random.Generator,
    perfect_reflection: bool = False
) -> list[Cluster]:
    """Draws `count` clusters between the array and the farthest user.

    Distances are uniform on [10·λ_c, max_k r_k] and angles uniform on
    [-π/2, π/2]. All distances are drawn first, then all angles.

    Raises
    ------
    ConfigurationError
        If `users` is empty, `count` is negative, or the farthest user is
        closer than 10·λ_c.
    """
    if not users:
        raise ConfigurationError("at least one user is required to place clusters")
    if count < 0:
        raise ConfigurationError(f"cluster count must be non-negative, got {count}")
    if count == 0:
        return []
    r_low = CLUSTER_MIN_DISTANCE_WAVELENGTHS * carrier.lambda_c
    r_high = max(user.r for user in users)
    if r_high < r_low:
        raise ConfigurationError(
            f"farthest user at {r_high:.4g} m is closer than the minimum "
            f"cluster distance {r_low:.4g} m"
        )
    distances = rng.uniform(r_low, r_high, size=count)
    angles = rng.uniform(-math.pi / 2, math.pi / 2, size=count)
    return [
        Cluster.at(PolarLocation(float(r), float(theta)), carrier, perfect_reflection)
        for r, theta in zip(distances, angles)
    ]


@dataclass(frozen=True)
class ChannelRealization:
    """
    One draw of the channels of all users.

    Attributes
    ----------
    channels: np.ndarray
        N×K complex matrix whose column k is h_k.
    nlos_coeffs: np.ndarray
        K×L complex matrix of fading coefficients g_{k,ℓ}.
    users: tuple[PolarLocation, ...]
        True user locations.
    clusters: tuple[Cluster, ...]
        Clusters shared by all users.
    carrier: CarrierConfig
    geometry: UlaGeometry
    scale: float
        Factor applied to the LoS terms by `normalize_realization` (1 for a
        raw realization). The stored `nlos_coeffs` already include it.
    """
    channels: np.ndarray
    nlos_coeffs: np.ndarray
    users: tuple[PolarLocation, ...]
    clusters: tuple[Cluster, ...]
    carrier: CarrierConfig
    geometry: UlaGeometry
    scale: float = field(default=1.0)

    @property
    def n_users(self) -> int:
        return self.channels.shape[1]

    @property
    def n_antennas(self) -> int:
        return self.channels.shape[0]

    def los_component(self) -> np.ndarray:
        """Returns the N×K matrix of (scaled) LoS terms."""
        return self.scale * los_matrix(self.users, self.carrier, self.geometry)

    def cluster_steering(self) -> np.ndarray:
        """Returns the N×L matrix of cluster steering vectors."""
        return _cluster_matrix(self.clusters, self.carrier, self.geometry)

    def reconstruct(self) -> np.ndarray:
        """Rebuilds the channels from the stored fading draws."""
        return self.los_component() + self.cluster_steering() @ self.nlos_coeffs.T


def los_matrix(
    users: tuple[PolarLocation, ...] | list[PolarLocation],
    carrier: CarrierConfig,
    geom: UlaGeometry
) -> np.ndarray:
    """Returns the N×K matrix of LoS terms
    (λ_c/(4π r_k))·exp(-j2π r_k/λ_c)·b(r_k, θ_k).
    """
    columns = [
        los_amplitude(user.r, carrier)
        * np.exp(-1j * carrier.wavenumber * user.r)
        * steering_vector(carrier, user, geom)
        for user in users
    ]
    return np.stack(columns, axis=1)


def _cluster_matrix(clusters, carrier: CarrierConfig, geom: UlaGeometry) -> np.ndarray:
    if not clusters:
        return np.zeros((geom.n_antennas, 0), dtype=complex)
    return np.stack(
        [steering_vector(carrier, cluster.location, geom) for cluster in clusters],
        axis=1
    )


def realize_channel(
    users: list[PolarLocation],
    clusters: list[Cluster],
    carrier: CarrierConfig,
    geom: UlaGeometry,
    rng: np.random.Generator
) -> ChannelRealization:
    """Draws the fading coefficients and builds the channels of all users.

    The K×L coefficients g_{k,ℓ} ~ CN(0, γ_ℓ²) are drawn in one row-major
    call (user-major), independently per user and cluster.
    """
    if not users:
        raise ConfigurationError("at least one user is required")
    los = los_matrix(users, carrier, geom)
    gamma_sq = np.array([cluster.large_scale_gamma_sq for cluster in clusters], dtype=float)
    coeffs = complex_normal(rng, (len(users), len(clusters)), gamma_sq[np.newaxis, :])
    channels = los + _cluster_matrix(clusters, carrier, geom) @ coeffs.T
    return ChannelRealization(
        channels=channels,
        nlos_coeffs=coeffs,
        users=tuple(users),
        clusters=tuple(clusters),
        carrier=carrier,
        geometry=geom
    )


def normalize_realization(
    realization: ChannelRealization,
    reference_user: int = 0
) -> ChannelRealization:
    """Scales all channels by 1/‖h_ref‖ so that the reference user's channel
    has unit norm. With σ² = 1 the SNR of the reference user then equals its
    transmit power ρ_ref.

    Raises
    ------
    ConfigurationError
        If `reference_user` is not a user index.
    NumericalError
        If the reference channel has zero norm.
    """
    if not 0 <= reference_user < realization.n_users:
        raise ConfigurationError(f"reference user {reference_user} does not exist")
    norm = float(np.linalg.norm(realization.channels[:, reference_user]))
    if norm == 0.0 or not math.isfinite(norm):
        raise NumericalError(f"cannot normalize to reference channel of norm {norm}")
    factor = 1.0 / norm
    return replace(
        realization,
        channels=realization.channels * factor,
        nlos_coeffs=realization.nlos_coeffs * factor,
        scale=realization.scale * factor
    )


def nlos_to_los_ratio(
    user: PolarLocation,
    clusters: list[Cluster],
    carrier: CarrierConfig
) -> float:
    """Returns the mean NLoS-to-LoS power ratio Σ_ℓ γ_ℓ² / (λ_c/(4π r_k))²
    seen by `user`.
    """
    los_power = los_amplitude(user.r, carrier) ** 2
    return sum(cluster.large_scale_gamma_sq for cluster in clusters) / los_power
