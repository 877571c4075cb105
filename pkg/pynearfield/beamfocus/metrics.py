from dataclasses import dataclass
import math

import numpy as np

from pynearfield.core.exceptions import ConfigurationError, DegenerateCombinerError
from pynearfield.core.channel import ChannelRealization
from .combiners import CombinerMatrix


@dataclass(frozen=True)
class SeReport:
    """
    Sum spectral efficiency of one channel realization.

    Attributes
    ----------
    per_user_sinr: tuple[float, ...]
    prelog: float
        1 - τ/T.
    sum_se: float
        prelog·Σ_k log₂(1 + SINR_k) in bit/s/Hz.
    overhead_len: int
        Pilot symbols τ spent per coherence block.
    """
    per_user_sinr: tuple[float, ...]
    prelog: float
    sum_se: float
    overhead_len: int


def _channels(realization: ChannelRealization | np.ndarray) -> np.ndarray:
    if isinstance(realization, ChannelRealization):
        return realization.channels
    return np.asarray(realization)


def sinr(
    user: int,
    combiner: CombinerMatrix | np.ndarray,
    realization: ChannelRealization | np.ndarray,
    powers: np.ndarray,
    sigma_sq: float
) -> float:
    """SINR of `user`:

        ρ_k|w_kᴴh_k|² / (Σ_{i≠k} ρ_i|w_kᴴh_i|² + σ²‖w_k‖²)

    Raises
    ------
    DegenerateCombinerError
        If the combiner column of `user` is zero.
    ConfigurationError
        On inconsistent dimensions.
    """
    W = combiner.columns if isinstance(combiner, CombinerMatrix) else np.asarray(combiner)
    H = _channels(realization)
    if W.shape[0] != H.shape[0]:
        raise ConfigurationError(f"combiner has {W.shape[0]} rows, channels have {H.shape[0]}")
    if not 0 <= user < H.shape[1] or user >= W.shape[1]:
        raise ConfigurationError(f"user {user} does not exist")
    powers = np.broadcast_to(np.asarray(powers, dtype=float), (H.shape[1],))
    w = W[:, user]
    w_norm_sq = float(np.vdot(w, w).real)
    if w_norm_sq == 0.0:
        raise DegenerateCombinerError(f"combiner of user {user} is zero")
    gains = np.abs(w.conj() @ H) ** 2 * powers
    signal = gains[user]
    interference = float(np.sum(np.delete(gains, user)))
    return float(signal / (interference + sigma_sq * w_norm_sq))


def sinrs(
    combiner: CombinerMatrix | np.ndarray,
    realization: ChannelRealization | np.ndarray,
    powers: np.ndarray,
    sigma_sq: float
) -> tuple[float, ...]:
    n_users = _channels(realization).shape[1]
    return tuple(sinr(k, combiner, realization, powers, sigma_sq) for k in range(n_users))


def sum_se(sinrs: tuple[float, ...] | list[float], overhead_len: int, T: int) -> SeReport:
    """Returns the sum-SE (1 - τ/T)·Σ_k log₂(1 + SINR_k).

    Raises
    ------
    ConfigurationError
        If the overhead is negative or longer than the coherence block.
    """
    if T <= 0:
        raise ConfigurationError(f"coherence length must be positive, got {T}")
    if not 0 <= overhead_len <= T:
        raise ConfigurationError(f"overhead {overhead_len} does not fit in a block of {T}")
    prelog = 1.0 - overhead_len / T
    total = math.fsum(math.log2(1.0 + s) for s in sinrs)
    return SeReport(tuple(float(s) for s in sinrs), prelog, prelog * total, int(overhead_len))
