from dataclasses import dataclass
import math

import numpy as np

from pynearfield.core.exceptions import ConfigurationError
from pynearfield.core.geometry import CarrierConfig, UlaGeometry, PolarLocation, fraunhofer_distance
from pynearfield.core.channel import CLUSTER_MIN_DISTANCE_WAVELENGTHS


def _inclusive_range(start: float, stop: float, step: float) -> np.ndarray:
    # Tolerates a stop that is one step away up to rounding.
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(max(count, 0))


@dataclass(frozen=True)
class MusicGrid:
    """
    Search grid of the 2D-MUSIC spectrum.

    Attributes
    ----------
    r_values: np.ndarray
        Strictly ascending distances in meters.
    theta_values: np.ndarray
        Strictly ascending angles in radians.
    r_step: float
        Distance step in meters.
    theta_step: float
        Angle step in radians (0 for a single known angle).
    provenance: str
        How the steps were chosen, e.g. "r_step=10λ, θ_step=0.5°".
    """
    r_values: np.ndarray
    theta_values: np.ndarray
    r_step: float
    theta_step: float
    provenance: str = ""

    def __post_init__(self) -> None:
        for name, values in (("r_values", self.r_values), ("theta_values", self.theta_values)):
            if values.ndim != 1 or values.size == 0:
                raise ConfigurationError(f"{name} must be a nonempty 1-D array")
            if values.size > 1 and np.any(np.diff(values) <= 0):
                raise ConfigurationError(f"{name} must be strictly ascending")
        if np.any(self.r_values <= 0):
            raise ConfigurationError("grid distances must be positive")
        if not self.r_step > 0:
            raise ConfigurationError(f"distance step must be positive, got {self.r_step}")
        if self.theta_values.size > 1 and not self.theta_step > 0:
            raise ConfigurationError(f"angle step must be positive, got {self.theta_step}")

    @classmethod
    def from_steps(
        cls,
        r_min: float,
        r_max: float,
        r_step: float,
        theta_min: float = -math.pi / 2,
        theta_max: float = math.pi / 2,
        theta_step: float = math.radians(0.5),
        provenance: str = ""
    ) -> "MusicGrid":
        """Builds a grid from inclusive ranges and steps (angles in radians)."""
        if not (r_step > 0 and theta_step > 0):
            raise ConfigurationError("grid steps must be positive")
        if r_max < r_min or theta_max < theta_min:
            raise ConfigurationError("grid ranges must be ascending")
        return cls(
            _inclusive_range(r_min, r_max, r_step),
            _inclusive_range(theta_min, theta_max, theta_step),
            r_step,
            theta_step,
            provenance
        )

    @classmethod
    def default(
        cls,
        carrier: CarrierConfig,
        geom: UlaGeometry,
        r_step_wavelengths: float = 10.0,
        theta_step_deg: float = 0.5,
        r_min_wavelengths: float = CLUSTER_MIN_DISTANCE_WAVELENGTHS,
        r_max: float | None = None,
        theta_min_deg: float = -90.0,
        theta_max_deg: float = 90.0
    ) -> "MusicGrid":
        """Grid over r ∈ [10λ_c, R_F] and θ ∈ [-90°, 90°] with steps given in
        wavelengths and degrees.
        """
        lam = carrier.lambda_c
        return cls.from_steps(
            r_min_wavelengths * lam,
            fraunhofer_distance(geom, carrier) if r_max is None else r_max,
            r_step_wavelengths * lam,
            math.radians(theta_min_deg),
            math.radians(theta_max_deg),
            math.radians(theta_step_deg),
            provenance=f"r_step={r_step_wavelengths:g}λ, θ_step={theta_step_deg:g}°"
        )

    @classmethod
    def around(
        cls,
        center: PolarLocation,
        relative_window: float,
        r_step: float,
        theta_values: np.ndarray | None = None,
        provenance: str = ""
    ) -> "MusicGrid":
        """Grid over r ∈ [(1-w)·r, (1+w)·r] with the given step. The angle
        axis defaults to the single true angle of `center` (known angle).
        """
        if not 0 < relative_window < 1:
            raise ConfigurationError(f"relative window must lie in (0, 1), got {relative_window}")
        if theta_values is None:
            theta_values = np.array([center.theta])
            theta_step = 0.0
        else:
            theta_values = np.asarray(theta_values, dtype=float)
            theta_step = float(theta_values[1] - theta_values[0]) if theta_values.size > 1 else 0.0
        return cls(
            _inclusive_range(center.r * (1 - relative_window), center.r * (1 + relative_window), r_step),
            theta_values,
            r_step,
            theta_step,
            provenance
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.r_values.size, self.theta_values.size

    @property
    def size(self) -> int:
        return self.r_values.size * self.theta_values.size

    def location(self, i: int, j: int) -> PolarLocation:
        return PolarLocation(float(self.r_values[i]), float(self.theta_values[j]))

    def nearest_index(self, loc: PolarLocation) -> tuple[int, int]:
        """Indices of the grid point closest to `loc` along each axis."""
        return (
            int(np.argmin(np.abs(self.r_values - loc.r))),
            int(np.argmin(np.abs(self.theta_values - loc.theta)))
        )
