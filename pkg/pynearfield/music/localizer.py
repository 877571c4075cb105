from dataclasses import dataclass
import logging

import numpy as np

from pynearfield.core.geometry import CarrierConfig, UlaGeometry, PolarLocation
from .grid import MusicGrid
from .subspace import SubspacePair, sample_covariance, hermitian_eigendecomposition
from .spectrum import music_spectrum
from .peaks import DEFAULT_MIN_SEPARATION, find_peaks, associate_estimates


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MusicResult:
    """
    Outcome of one 2D-MUSIC localization.

    Attributes
    ----------
    grid: MusicGrid
    spectrum: np.ndarray
        S(r, θ) on the grid (positive).
    subspaces: SubspacePair
    peaks: tuple[PolarLocation, ...]
        K peak locations in descending spectrum value.
    association: tuple[int, ...]
        Entry i is the user index of peak i.
    """
    grid: MusicGrid
    spectrum: np.ndarray
    subspaces: SubspacePair
    peaks: tuple[PolarLocation, ...]
    association: tuple[int, ...]

    @property
    def estimates(self) -> tuple[PolarLocation, ...]:
        """Peak locations reordered by user index."""
        by_user: list[PolarLocation | None] = [None] * len(self.peaks)
        for peak, user in zip(self.peaks, self.association):
            by_user[user] = peak
        return tuple(by_user)

    def errors(self, true_locations: list[PolarLocation]) -> list[tuple[float, float]]:
        """Per-user (distance error in m, angle error in rad)."""
        return [
            (est.r - true.r, est.theta - true.theta)
            for est, true in zip(self.estimates, true_locations)
        ]


def localize(
    Y_loc: np.ndarray,
    n_users: int,
    grid: MusicGrid,
    carrier: CarrierConfig,
    geom: UlaGeometry,
    true_locations: list[PolarLocation] | None = None,
    min_separation: int = DEFAULT_MIN_SEPARATION,
    workers: int = 1
) -> MusicResult:
    """Runs 2D-MUSIC on the received localization pilots `Y_loc` (N×τ_Loc).

    Without `true_locations` the peaks are associated with users in peak
    order.
    """
    R = sample_covariance(Y_loc)
    subspaces = hermitian_eigendecomposition(R, n_users)
    spectrum = music_spectrum(subspaces, grid, carrier, geom, workers=workers)
    peaks = find_peaks(spectrum, grid, n_users, min_separation)
    if true_locations is None:
        association = tuple(range(n_users))
    else:
        association = associate_estimates(peaks, list(true_locations))
    logger.debug(
        "MUSIC peaks: " + ", ".join(f"({p.r:.4f} m, {p.theta_deg:.2f}°)" for p in peaks)
    )
    return MusicResult(grid, spectrum, subspaces, tuple(peaks), association)
