"""
Uplink pilots, received pilot matrices, AWGN and the LS channel estimator.
"""
from dataclasses import dataclass
import math

import numpy as np

from .exceptions import ConfigurationError
from .channel import ChannelRealization
from .rng import complex_normal


THERMAL_NOISE_DBM_PER_HZ = -174.0


def dbm_to_mw(value_dbm: float) -> float:
    return 10.0 ** (value_dbm / 10.0)


def mw_to_dbm(value_mw: float) -> float:
    return 10.0 * math.log10(value_mw)


def round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


@dataclass(frozen=True)
class PilotBook:
    """
    Orthogonal pilots of all users.

    Attributes
    ----------
    matrix: np.ndarray
        τ×K complex matrix; column k is the pilot of user k.
    """
    matrix: np.ndarray

    def __post_init__(self) -> None:
        if self.matrix.ndim != 2:
            raise ConfigurationError("pilot matrix must be two-dimensional")
        if self.length < self.n_users:
            raise ConfigurationError(
                f"pilot length {self.length} is shorter than the number of users {self.n_users}"
            )

    @property
    def length(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_users(self) -> int:
        return self.matrix.shape[1]

    def pilot(self, k: int) -> np.ndarray:
        return self.matrix[:, k]


@dataclass(frozen=True)
class NoiseModel:
    """
    Additive white Gaussian noise.

    Attributes
    ----------
    sigma_sq: float
        Noise power σ² (linear, in the unit of the transmit powers; mW when
        derived from a noise figure).
    """
    sigma_sq: float

    def __post_init__(self) -> None:
        if not (self.sigma_sq >= 0 and math.isfinite(self.sigma_sq)):
            raise ConfigurationError(f"noise power must be non-negative, got {self.sigma_sq}")

    @classmethod
    def from_noise_figure(cls, noise_figure_db: float, bandwidth: float) -> "NoiseModel":
        """σ²[dBm] = ξ - 174 + 10·log₁₀(B)."""
        if not bandwidth > 0:
            raise ConfigurationError(f"bandwidth must be positive, got {bandwidth}")
        sigma_sq_dbm = noise_figure_db + THERMAL_NOISE_DBM_PER_HZ + 10.0 * math.log10(bandwidth)
        return cls(dbm_to_mw(sigma_sq_dbm))

    @property
    def sigma_sq_dbm(self) -> float:
        return mw_to_dbm(self.sigma_sq)


def dft_pilot_book(length: int, users: int) -> PilotBook:
    """Returns the first `users` columns of the `length`-point DFT matrix,
    entry (t, k) = exp(-j2π·t·k/τ).

    Raises
    ------
    ConfigurationError
        If `length` < `users` or `users` < 1.
    """
    if users < 1:
        raise ConfigurationError(f"number of users must be positive, got {users}")
    if length < users:
        raise ConfigurationError(f"pilot length {length} is shorter than the number of users {users}")
    t = np.arange(length)[:, np.newaxis]
    k = np.arange(users)[np.newaxis, :]
    return PilotBook(np.exp(-2j * np.pi * t * k / length))


def pilot_lengths(
    coherence_length: int,
    users: int,
    pilot_fraction: float = 0.2,
    localization_fraction: float = 0.005
) -> tuple[int, int]:
    """Returns (τ_Pil, τ_Loc) for a coherence block of `coherence_length`
    symbols, both rounded half up.

    Raises
    ------
    ConfigurationError
        If either length is shorter than `users` (no orthogonal pilots).
    """
    tau_pil = round_half_up(pilot_fraction * coherence_length)
    tau_loc = round_half_up(localization_fraction * coherence_length)
    for name, tau in (("τ_Pil", tau_pil), ("τ_Loc", tau_loc)):
        if tau < users:
            raise ConfigurationError(
                f"{name} = {tau} symbols cannot carry orthogonal pilots for {users} users "
                f"(coherence block of {coherence_length} symbols)"
            )
    return tau_pil, tau_loc


def _as_channels(realization: ChannelRealization | np.ndarray) -> np.ndarray:
    if isinstance(realization, ChannelRealization):
        return realization.channels
    return np.asarray(realization)


def noiseless_pilot_matrix(
    realization: ChannelRealization | np.ndarray,
    pilots: PilotBook,
    powers: np.ndarray
) -> np.ndarray:
    """Returns Σ_k √ρ_k·h_k·p_kᵀ (N×τ)."""
    channels = _as_channels(realization)
    powers = np.broadcast_to(np.asarray(powers, dtype=float), (channels.shape[1],))
    if pilots.n_users != channels.shape[1]:
        raise ConfigurationError(
            f"pilot book serves {pilots.n_users} users but the realization has {channels.shape[1]}"
        )
    if np.any(powers < 0):
        raise ConfigurationError("transmit powers must be non-negative")
    return (channels * np.sqrt(powers)) @ pilots.matrix.T


def received_pilot_matrix(
    realization: ChannelRealization | np.ndarray,
    pilots: PilotBook,
    powers: np.ndarray,
    noise: NoiseModel,
    rng: np.random.Generator
) -> np.ndarray:
    """Returns Y = Σ_k √ρ_k·h_k·p_kᵀ + N with N i.i.d. CN(0, σ²).

    The noise is drawn as one N×τ complex normal block, so the same `rng`
    state reproduces the same noise.

    Raises
    ------
    ConfigurationError
        If the pilot book and the realization disagree on the number of users.
    """
    clean = noiseless_pilot_matrix(realization, pilots, powers)
    return clean + complex_normal(rng, clean.shape, noise.sigma_sq)


def ls_estimate(
    Y: np.ndarray,
    pilot_k: np.ndarray,
    rho_k: float,
    tau: int
) -> np.ndarray:
    """Least-squares estimate ĥ_k = Y·p_k*/(√ρ_k·τ).

    Raises
    ------
    ConfigurationError
        If ρ_k is not positive or `tau` does not match Y and the pilot.
    """
    if not rho_k > 0:
        raise ConfigurationError(f"LS estimation needs a positive transmit power, got {rho_k}")
    if Y.shape[1] != tau or pilot_k.shape[0] != tau:
        raise ConfigurationError(
            f"pilot length {tau} does not match received matrix with {Y.shape[1]} columns"
        )
    return Y @ pilot_k.conj() / (math.sqrt(rho_k) * tau)


def ls_estimates(Y: np.ndarray, pilots: PilotBook, powers: np.ndarray) -> np.ndarray:
    """LS estimates of all users as an N×K matrix."""
    powers = np.broadcast_to(np.asarray(powers, dtype=float), (pilots.n_users,))
    return np.stack(
        [ls_estimate(Y, pilots.pilot(k), powers[k], pilots.length) for k in range(pilots.n_users)],
        axis=1
    )
