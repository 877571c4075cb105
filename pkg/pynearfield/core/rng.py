"""
Seeded random streams and complex Gaussian draws.

Every random quantity of a simulation is drawn from a `numpy.random.Generator`
that is derived from the master seed and a small integer key. The key of a
trial stream is `(trial_index, purpose)`, so a trial produces the same draws
whether it runs alone, inside a large batch, or on another worker.
"""
import numpy as np


# Stream purposes (second element of a trial key).
CHANNEL = 0
PILOT_NOISE = 1
LOCALIZATION_NOISE = 2
CLUSTERS = 3


def substream(master_seed: int, *key: int) -> np.random.Generator:
    """Returns the generator for `key` under `master_seed`.

    Parameters
    ----------
    master_seed : int
        Non-negative master seed of the run.
    *key : int
        Spawn key, e.g. `(trial_index, CHANNEL)`.
    """
    seq = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(seq))


def complex_normal(
    rng: np.random.Generator,
    shape: tuple[int, ...],
    variance: float | np.ndarray = 1.0
) -> np.ndarray:
    """Draws circularly-symmetric complex Gaussian entries.

    One `standard_normal(shape + (2,))` call supplies the real and imaginary
    parts of each entry in row-major order; both are scaled by
    `sqrt(variance / 2)`. `variance` broadcasts against `shape`.
    """
    z = rng.standard_normal(tuple(shape) + (2,))
    scale = np.sqrt(np.asarray(variance, dtype=float) / 2.0)
    return (z[..., 0] + 1j * z[..., 1]) * scale
