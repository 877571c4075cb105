"""
2D-MUSIC spectrum S(r, θ) = 1/(bᴴ·U_n·U_nᴴ·b) over an (r, θ) grid.

The fast path uses bᴴU_nU_nᴴb = N - ‖U_sᴴb‖², valid because ‖b‖² = N and
[U_s U_n] is unitary; it costs O(NK) per grid point. The naive path projects
on U_n directly and is kept as a reference.
"""
from concurrent.futures import ThreadPoolExecutor
import logging

import numpy as np

from pynearfield.core.exceptions import ConfigurationError
from pynearfield.core.geometry import CarrierConfig, UlaGeometry, steering_matrix
from .grid import MusicGrid
from .subspace import SubspacePair


logger = logging.getLogger(__name__)

DENOMINATOR_FLOOR = 1e-15

# Upper bound on grid points × antennas held in memory per tile.
TILE_BUDGET = 1 << 21


def _row_tiles(grid: MusicGrid, n_antennas: int) -> list[slice]:
    rows_per_tile = max(1, TILE_BUDGET // max(1, grid.theta_values.size * n_antennas))
    n_rows = grid.r_values.size
    return [slice(i, min(i + rows_per_tile, n_rows)) for i in range(0, n_rows, rows_per_tile)]


def _tile_denominator(
    rows: slice,
    subspaces: SubspacePair,
    grid: MusicGrid,
    carrier: CarrierConfig,
    geom: UlaGeometry,
    method: str
) -> np.ndarray:
    b = steering_matrix(carrier, grid.r_values[rows], grid.theta_values, geom)
    n = geom.n_antennas
    if method == "fast":
        projection = b @ subspaces.signal_basis.conj()
        denominator = n - np.sum(projection.real ** 2 + projection.imag ** 2, axis=-1)
    else:
        projection = b @ subspaces.noise_basis.conj()
        denominator = np.sum(projection.real ** 2 + projection.imag ** 2, axis=-1)
    return np.maximum(denominator, DENOMINATOR_FLOOR * n)


def spectrum_denominator(
    subspaces: SubspacePair,
    grid: MusicGrid,
    carrier: CarrierConfig,
    geom: UlaGeometry,
    method: str = "fast",
    workers: int = 1
) -> np.ndarray:
    """Returns bᴴU_nU_nᴴb at every grid point, clamped at 1e-15·N.

    Parameters
    ----------
    subspaces : SubspacePair
        Signal/noise split of the sample covariance.
    grid : MusicGrid
        Search grid; the result has shape `grid.shape`.
    method : str
        "fast" (signal-subspace identity) or "naive" (noise projection).
    workers : int
        Number of threads evaluating row tiles. Every grid cell is computed
        independently, so the result does not depend on `workers`.
    """
    if method not in ("fast", "naive"):
        raise ConfigurationError(f"unknown spectrum method '{method}'")
    if subspaces.n_antennas != geom.n_antennas:
        raise ConfigurationError(
            f"subspaces have dimension {subspaces.n_antennas}, array has {geom.n_antennas} antennas"
        )
    if subspaces.n_sources >= geom.n_antennas:
        raise ConfigurationError("2D-MUSIC needs fewer sources than antennas")
    tiles = _row_tiles(grid, geom.n_antennas)
    out = np.empty(grid.shape, dtype=float)

    def evaluate(rows: slice) -> None:
        out[rows] = _tile_denominator(rows, subspaces, grid, carrier, geom, method)

    if workers > 1 and len(tiles) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(evaluate, tiles))
    else:
        for rows in tiles:
            evaluate(rows)
    return out


def music_spectrum(
    subspaces: SubspacePair,
    grid: MusicGrid,
    carrier: CarrierConfig,
    geom: UlaGeometry,
    method: str = "fast",
    workers: int = 1
) -> np.ndarray:
    """Returns the 2D-MUSIC spectrum S(r, θ) on `grid` (shape `grid.shape`).
    See `spectrum_denominator` for the parameters.
    """
    return 1.0 / spectrum_denominator(subspaces, grid, carrier, geom, method, workers)
