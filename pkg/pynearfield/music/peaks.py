import itertools
import logging

import numpy as np
from scipy.ndimage import maximum_filter
from scipy.optimize import linear_sum_assignment

from pynearfield.core.exceptions import ConfigurationError, PeakSearchError
from pynearfield.core.geometry import PolarLocation
from .grid import MusicGrid


logger = logging.getLogger(__name__)

DEFAULT_MIN_SEPARATION = 3

_NEIGHBOURS = np.array([[1, 1, 1], [1, 0, 1], [1, 1, 1]], dtype=bool)


def strict_local_maxima(spectrum: np.ndarray) -> np.ndarray:
    """Boolean mask of the cells that exceed all of their (up to) eight
    neighbours. Cells outside the grid count as -inf.
    """
    neighbour_max = maximum_filter(
        spectrum, footprint=_NEIGHBOURS, mode="constant", cval=-np.inf
    )
    return spectrum > neighbour_max


def _separated(candidate: tuple[int, int], accepted: list[tuple[int, int]], min_separation: int) -> bool:
    # Rejected when closer than `min_separation` cells along both axes.
    return all(
        abs(candidate[0] - i) >= min_separation or abs(candidate[1] - j) >= min_separation
        for i, j in accepted
    )


def find_peak_indices(
    spectrum: np.ndarray,
    n_peaks: int,
    min_separation: int = DEFAULT_MIN_SEPARATION
) -> list[tuple[int, int]]:
    """Returns the (row, column) indices of `n_peaks` spectrum peaks.

    Strict local maxima are taken in descending value while keeping
    accepted peaks at least `min_separation` cells apart in one axis. If
    fewer than `n_peaks` qualify, the largest remaining grid values fill the
    list (separated ones first).

    Raises
    ------
    ConfigurationError
        If the grid does not have more cells than `n_peaks`.
    PeakSearchError
        If the spectrum is constant.
    """
    if n_peaks < 1:
        raise ConfigurationError(f"number of peaks must be positive, got {n_peaks}")
    if spectrum.size <= n_peaks:
        raise ConfigurationError(
            f"grid of {spectrum.size} points is too small for {n_peaks} peaks"
        )
    if np.all(spectrum == spectrum.flat[0]):
        raise PeakSearchError("spectrum is constant; no peak can be selected")

    # Stable descending order: equal values keep row-major order.
    order = np.argsort(-spectrum, axis=None, kind="stable")
    maxima = strict_local_maxima(spectrum).ravel()

    accepted: list[tuple[int, int]] = []
    for flat in order[maxima[order]]:
        candidate = np.unravel_index(flat, spectrum.shape)
        candidate = (int(candidate[0]), int(candidate[1]))
        if _separated(candidate, accepted, min_separation):
            accepted.append(candidate)
            if len(accepted) == n_peaks:
                return accepted

    logger.debug(f"only {len(accepted)} strict peaks for {n_peaks} users, filling")
    for require_separation in (True, False):
        for flat in order:
            candidate = np.unravel_index(flat, spectrum.shape)
            candidate = (int(candidate[0]), int(candidate[1]))
            if candidate in accepted:
                continue
            if require_separation and not _separated(candidate, accepted, min_separation):
                continue
            accepted.append(candidate)
            if len(accepted) == n_peaks:
                return accepted
    return accepted


def find_peaks(
    spectrum: np.ndarray,
    grid: MusicGrid,
    n_peaks: int,
    min_separation: int = DEFAULT_MIN_SEPARATION
) -> list[PolarLocation]:
    """Returns the grid locations of the `n_peaks` largest separated peaks of
    `spectrum`, in descending spectrum value.
    """
    if spectrum.shape != grid.shape:
        raise ConfigurationError(f"spectrum shape {spectrum.shape} does not match grid {grid.shape}")
    return [grid.location(i, j) for i, j in find_peak_indices(spectrum, n_peaks, min_separation)]


def association_cost(peak: PolarLocation, user: PolarLocation) -> float:
    """|r̂ - r|/r + |θ̂ - θ|."""
    return abs(peak.r - user.r) / user.r + abs(peak.theta - user.theta)


def associate_estimates(
    peaks: list[PolarLocation],
    true_locations: list[PolarLocation]
) -> tuple[int, ...]:
    """Pairs peaks with users at minimal total `association_cost`.

    Returns
    -------
    tuple of int
        Permutation whose entry i is the user index of peak i.

    Raises
    ------
    ConfigurationError
        If the counts differ.
    """
    if len(peaks) != len(true_locations):
        raise ConfigurationError(
            f"cannot associate {len(peaks)} peaks with {len(true_locations)} users"
        )
    cost = np.array([[association_cost(p, u) for u in true_locations] for p in peaks])
    rows, cols = linear_sum_assignment(cost)
    permutation = [0] * len(peaks)
    for i, k in zip(rows, cols):
        permutation[int(i)] = int(k)
    return tuple(permutation)


def associate_exhaustive(
    peaks: list[PolarLocation],
    true_locations: list[PolarLocation]
) -> tuple[int, ...]:
    """Brute-force reference of `associate_estimates` over all K! pairings."""
    if len(peaks) != len(true_locations):
        raise ConfigurationError(
            f"cannot associate {len(peaks)} peaks with {len(true_locations)} users"
        )
    return min(
        itertools.permutations(range(len(true_locations))),
        key=lambda perm: sum(association_cost(p, true_locations[k]) for p, k in zip(peaks, perm))
    )
