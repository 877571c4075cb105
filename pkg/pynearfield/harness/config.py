"""
Experiment configuration.

A `ScenarioConfig` holds the user-facing parameters of an experiment, with
geometry given relative to the wavelength and the Fraunhofer distance. Calling
`resolve` turns it into a `ResolvedScenario` holding the physical objects
(carrier, array, user locations, noise, pilot lengths, search grids) and an
audit echo of every derived quantity.
"""
from dataclasses import dataclass, field, fields, asdict, replace
from enum import Enum
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from pynearfield.core.exceptions import ConfigurationError
from pynearfield.core.geometry import CarrierConfig, UlaGeometry, PolarLocation, fraunhofer_distance
from pynearfield.core.signaling import NoiseModel, dbm_to_mw, pilot_lengths, round_half_up
from pynearfield.beamfocus.strategies import STRATEGY_NAMES, FINE_GRID, COARSE_GRID
from pynearfield.music.grid import MusicGrid


REFERENCE_FREQUENCY = 100e9  # Hz, frequency at which `coherence_ref` is given

# User angles of the two- and three-antenna presets. Broadside carries no
# distance information for these arrays; sinθ·cos²θ, the weight of the
# distance-dependent part of the two-antenna path difference, peaks at
# asin(1/√3). Separating two aligned users with three antennas also relies on
# the cos²θ curvature term, which favours a smaller angle.
TWO_ANTENNA_THETA_DEG = math.degrees(math.asin(1 / math.sqrt(3)))
THREE_ANTENNA_THETA_DEG = 25.0


class NoiseMode(str, Enum):
    # σ² = 1 and channels normalized to the first user: SNR_1 = ρ_1.
    NORMALIZED = "normalized"
    # σ²[dBm] = ξ - 174 + 10·log₁₀(B), powers in dBm.
    PHYSICAL = "physical"
    NOISELESS = "noiseless"


@dataclass(frozen=True)
class UserConfig:
    """
    Attributes
    ----------
    r_fraction: float
        Distance as a fraction of the Fraunhofer distance, in (0, 1].
    theta_deg: float
        Angle from broadside in degrees.
    """
    r_fraction: float
    theta_deg: float = 0.0

    def __post_init__(self) -> None:
        if not 0 < self.r_fraction <= 1:
            raise ConfigurationError(f"user distance fraction must lie in (0, 1], got {self.r_fraction}")
        if not -90 <= self.theta_deg <= 90:
            raise ConfigurationError(f"user angle must lie in [-90, 90] degrees, got {self.theta_deg}")


@dataclass(frozen=True)
class GridConfig:
    """
    2D-MUSIC search grids. Distance steps are in wavelengths, angles in
    degrees; the distance range is [r_min_wavelengths·λ_c, r_max_fraction·R_F].
    """
    fine_r_step_wavelengths: float = 10.0
    coarse_r_step_wavelengths: float = 100.0
    theta_step_deg: float = 0.5
    r_min_wavelengths: float = 10.0
    r_max_fraction: float = 1.0
    theta_min_deg: float = -90.0
    theta_max_deg: float = 90.0
    min_peak_separation: int = 3

    def __post_init__(self) -> None:
        if not (self.fine_r_step_wavelengths > 0 and self.coarse_r_step_wavelengths > 0):
            raise ConfigurationError("grid distance steps must be positive")
        if not self.theta_step_deg > 0:
            raise ConfigurationError("grid angle step must be positive")
        if not (self.r_min_wavelengths > 0 and self.r_max_fraction > 0):
            raise ConfigurationError("grid distance range must be positive")
        if self.theta_max_deg < self.theta_min_deg:
            raise ConfigurationError("grid angle range must be ascending")
        if self.min_peak_separation < 1:
            raise ConfigurationError("minimum peak separation must be at least one cell")


def _tuple(values, cast=float) -> tuple:
    return tuple(cast(v) for v in values)


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Parameters of an experiment.

    Attributes
    ----------
    fc_hz: float
        Carrier frequency.
    n_antennas: int
        Number of ULA antennas N.
    spacing_wavelengths: float
        Antenna spacing d in wavelengths.
    users: tuple[UserConfig, ...]
        User placement; user 0 is the reference user of the normalized mode.
    n_clusters: int
        Number L of NLoS clusters.
    freeze_clusters: bool
        Draw the clusters once per run instead of once per trial.
    perfect_reflection: bool
        Use α_ℓ = 1 instead of the measured reflection fit.
    coherence_ref: int
        Coherence block length T₀ at 100 GHz; T(fc) = T₀·10¹¹/fc.
    bandwidth_fraction: float
        Bandwidth B = bandwidth_fraction·fc.
    noise_mode: NoiseMode
    noise_figure_db: float
        Noise figure ξ of the physical mode.
    snr_db: float
        Transmit power ρ_k in dB with σ² = 1 (normalized and noiseless modes).
    power_dbm: float
        Transmit power ρ_k of the physical mode.
    pilot_fraction, localization_fraction: float
        τ_Pil = 0.2·T and τ_Loc = 0.005·T by default.
    grid: GridConfig
    strategies: tuple[str, ...]
        Combining strategies compared in sum-SE runs.
    trials, seed, workers: int
        Number of Monte-Carlo trials, master seed, worker processes.
    snr_db_values, fc_ghz_values, r_fractions, n_antennas_values: tuple
        Sweep axes of the figure runs.
    search_width, m_min, use_distance_hint:
        M selection of the closed-form two-antenna estimator.
    variance_window, variance_r_step_wavelengths: float
        Restricted distance grid (±window around the truth) of the variance
        measurement.
    profile_r_min_fraction, profile_r_max_fraction,
    profile_r_step_wavelengths: float
        Distance axis of the three-antenna spectrum profiles.
    """
    fc_hz: float = 100e9
    n_antennas: int = 128
    spacing_wavelengths: float = 0.5
    users: tuple[UserConfig, ...] = (UserConfig(1 / 8), UserConfig(1 / 2))
    n_clusters: int = 2
    freeze_clusters: bool = False
    perfect_reflection: bool = False
    coherence_ref: int = 5000
    bandwidth_fraction: float = 0.001
    noise_mode: NoiseMode = NoiseMode.NORMALIZED
    noise_figure_db: float = 13.0
    snr_db: float = 20.0
    power_dbm: float = 23.0
    pilot_fraction: float = 0.2
    localization_fraction: float = 0.005
    grid: GridConfig = field(default_factory=GridConfig)
    strategies: tuple[str, ...] = STRATEGY_NAMES
    trials: int = 50
    seed: int = 0
    workers: int = 1
    snr_db_values: tuple[float, ...] = (10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0)
    fc_ghz_values: tuple[float, ...] = (10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0)
    r_fractions: tuple[float, ...] = ()
    n_antennas_values: tuple[int, ...] = ()
    search_width: int = 8
    m_min: int | None = None
    use_distance_hint: bool = False
    variance_window: float = 0.2
    variance_r_step_wavelengths: float = 0.1
    profile_r_min_fraction: float = 0.05
    profile_r_max_fraction: float = 1.0
    profile_r_step_wavelengths: float = 0.1

    def __post_init__(self) -> None:
        if not self.fc_hz > 0:
            raise ConfigurationError(f"carrier frequency must be positive, got {self.fc_hz}")
        if int(self.n_antennas) != self.n_antennas or self.n_antennas < 1:
            raise ConfigurationError(f"number of antennas must be a positive integer, got {self.n_antennas}")
        if not self.spacing_wavelengths > 0:
            raise ConfigurationError("antenna spacing must be positive")
        if not self.users:
            raise ConfigurationError("at least one user is required")
        if len(self.users) >= self.n_antennas and self.n_antennas > 1:
            raise ConfigurationError("2D-MUSIC needs fewer users than antennas")
        if self.n_clusters < 0:
            raise ConfigurationError("number of clusters must be non-negative")
        if not self.coherence_ref >= 1:
            raise ConfigurationError("coherence block length must be positive")
        if not self.bandwidth_fraction > 0:
            raise ConfigurationError("bandwidth fraction must be positive")
        for name in ("pilot_fraction", "localization_fraction"):
            if not 0 < getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must lie in (0, 1)")
        if self.trials < 1:
            raise ConfigurationError(f"number of trials must be at least 1, got {self.trials}")
        if self.seed < 0:
            raise ConfigurationError("seed must be non-negative")
        if self.workers < 1:
            raise ConfigurationError("number of workers must be at least 1")
        unknown = [s for s in self.strategies if s not in STRATEGY_NAMES]
        if unknown:
            raise ConfigurationError(f"unknown strategies: {', '.join(unknown)}")
        if any(not 0 < fr <= 1 for fr in self.r_fractions):
            raise ConfigurationError("distance fractions must lie in (0, 1]")
        if any(not f > 0 for f in self.fc_ghz_values):
            raise ConfigurationError("carrier frequencies must be positive")
        if self.search_width < 1:
            raise ConfigurationError("search width must be at least 1")
        if not 0 < self.variance_window < 1:
            raise ConfigurationError("variance window must lie in (0, 1)")
        for name in ("variance_r_step_wavelengths", "profile_r_step_wavelengths"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be positive")
        if not 0 < self.profile_r_min_fraction < self.profile_r_max_fraction:
            raise ConfigurationError("profile distance range must be ascending and positive")

    @property
    def n_users(self) -> int:
        return len(self.users)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ScenarioConfig":
        """Builds a configuration from plain (JSON) values. Missing keys keep
        their defaults; unknown keys are rejected.
        """
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
        values = dict(data)
        try:
            if "users" in values:
                values["users"] = tuple(
                    u if isinstance(u, UserConfig) else UserConfig(**u) for u in values["users"]
                )
            if "grid" in values and not isinstance(values["grid"], GridConfig):
                values["grid"] = GridConfig(**values["grid"])
            if "noise_mode" in values:
                values["noise_mode"] = NoiseMode(values["noise_mode"])
            for name in ("snr_db_values", "fc_ghz_values", "r_fractions"):
                if name in values:
                    values[name] = _tuple(values[name])
            if "n_antennas_values" in values:
                values["n_antennas_values"] = _tuple(values["n_antennas_values"], int)
            if "strategies" in values:
                values["strategies"] = _tuple(values["strategies"], str)
            return cls(**values)
        except (TypeError, ValueError) as error:
            if isinstance(error, ConfigurationError):
                raise
            raise ConfigurationError(f"invalid configuration: {error}") from error

    @classmethod
    def from_json(cls, path: str | Path, base: "ScenarioConfig | None" = None) -> "ScenarioConfig":
        """Reads a JSON object; its keys override `base` (or the defaults)."""
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as error:
            raise ConfigurationError(f"cannot read configuration '{path}': {error}") from error
        if not isinstance(data, dict):
            raise ConfigurationError("configuration file must contain a JSON object")
        merged = base.to_dict() if base is not None else {}
        merged.update(data)
        return cls.from_dict(merged)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["noise_mode"] = self.noise_mode.value
        return data

    def with_overrides(self, **changes) -> "ScenarioConfig":
        """Copy with the given fields replaced; `None` values are ignored."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def coherence_length(fc: float, coherence_ref: int) -> int:
    """T(fc) = T₀·10¹¹/fc, rounded half up."""
    return max(1, round_half_up(coherence_ref * REFERENCE_FREQUENCY / fc))


@dataclass(frozen=True)
class ResolvedScenario:
    """
    Physical objects derived from a `ScenarioConfig`.
    """
    config: ScenarioConfig
    carrier: CarrierConfig
    geometry: UlaGeometry
    fraunhofer: float
    users: tuple[PolarLocation, ...]
    coherence: int
    tau_pil: int
    tau_loc: int
    powers: np.ndarray
    noise: NoiseModel
    bandwidth: float
    grids: dict[str, MusicGrid]

    def as_dict(self) -> dict[str, Any]:
        """Audit echo of the configuration and every derived quantity. The
        worker count does not change any result and is left out.
        """
        config = self.config.to_dict()
        del config["workers"]
        return {
            "config": config,
            "derived": {
                "lambda_c_m": self.carrier.lambda_c,
                "spacing_m": self.geometry.spacing,
                "aperture_m": self.geometry.aperture,
                "fraunhofer_m": self.fraunhofer,
                "coherence_T": self.coherence,
                "tau_pil": self.tau_pil,
                "tau_loc": self.tau_loc,
                "bandwidth_hz": self.bandwidth,
                "sigma_sq": self.noise.sigma_sq,
                "powers": [float(p) for p in self.powers],
                "users": [{"r_m": u.r, "theta_deg": u.theta_deg} for u in self.users],
                "grids": {
                    name: {"n_r": grid.shape[0], "n_theta": grid.shape[1], "provenance": grid.provenance}
                    for name, grid in self.grids.items()
                },
            },
        }


def resolve(config: ScenarioConfig, build_grids: bool = True) -> ResolvedScenario:
    """Derives the physical scenario of `config`.

    Raises
    ------
    ConfigurationError
        If the derived quantities are inconsistent (e.g. a user closer than
        the grid minimum).
    """
    carrier = CarrierConfig(config.fc_hz)
    geometry = UlaGeometry.from_wavelengths(config.n_antennas, config.spacing_wavelengths, carrier)
    rf = fraunhofer_distance(geometry, carrier)
    if rf <= 0:
        raise ConfigurationError("a single antenna has no near field; use at least two antennas")
    users = tuple(PolarLocation.from_degrees(u.r_fraction * rf, u.theta_deg) for u in config.users)
    coherence = coherence_length(carrier.fc, config.coherence_ref)
    tau_pil, tau_loc = pilot_lengths(
        coherence, config.n_users, config.pilot_fraction, config.localization_fraction
    )
    if tau_pil > coherence or tau_loc > coherence:
        raise ConfigurationError(f"pilots do not fit in a coherence block of {coherence} symbols")
    bandwidth = config.bandwidth_fraction * carrier.fc
    match config.noise_mode:
        case NoiseMode.PHYSICAL:
            noise = NoiseModel.from_noise_figure(config.noise_figure_db, bandwidth)
            power = dbm_to_mw(config.power_dbm)
        case NoiseMode.NOISELESS:
            noise = NoiseModel(0.0)
            power = 10.0 ** (config.snr_db / 10.0)
        case _:
            noise = NoiseModel(1.0)
            power = 10.0 ** (config.snr_db / 10.0)
    powers = np.full(config.n_users, power)

    grids: dict[str, MusicGrid] = {}
    if build_grids:
        g = config.grid
        for name, step in ((FINE_GRID, g.fine_r_step_wavelengths), (COARSE_GRID, g.coarse_r_step_wavelengths)):
            grids[name] = MusicGrid.default(
                carrier,
                geometry,
                r_step_wavelengths=step,
                theta_step_deg=g.theta_step_deg,
                r_min_wavelengths=g.r_min_wavelengths,
                r_max=g.r_max_fraction * rf,
                theta_min_deg=g.theta_min_deg,
                theta_max_deg=g.theta_max_deg
            )

    return ResolvedScenario(
        config=config,
        carrier=carrier,
        geometry=geometry,
        fraunhofer=rf,
        users=users,
        coherence=coherence,
        tau_pil=tau_pil,
        tau_loc=tau_loc,
        powers=powers,
        noise=noise,
        bandwidth=bandwidth,
        grids=grids
    )


def preset(name: str, paper_scale: bool = False) -> ScenarioConfig:
    """Returns the configuration reproducing figure `name` ("fig1" … "fig5";
    "run" is the fig4 scenario at a single SNR). `paper_scale` restores
    N = 512 and 100 trials for the sum-SE figures.
    """
    match name:
        case "fig1":
            return ScenarioConfig(
                n_antennas=2,
                spacing_wavelengths=9.0,
                users=(UserConfig(1 / 10, TWO_ANTENNA_THETA_DEG),),
                n_clusters=0,
                snr_db=20.0,
                r_fractions=(1 / 10, 1 / 2),
                trials=10_000,
                strategies=(),
                profile_r_step_wavelengths=0.01
            )
        case "fig2":
            return ScenarioConfig(
                n_antennas=64,
                spacing_wavelengths=0.5,
                users=(UserConfig(1 / 10),),
                n_clusters=0,
                snr_db=20.0,
                r_fractions=(1 / 10, 1 / 6, 1 / 4, 1 / 3, 1 / 2),
                n_antennas_values=(64, 128),
                trials=500,
                strategies=()
            )
        case "fig3":
            return ScenarioConfig(
                n_antennas=3,
                spacing_wavelengths=9.0,
                users=(UserConfig(1 / 4, THREE_ANTENNA_THETA_DEG), UserConfig(1 / 2, THREE_ANTENNA_THETA_DEG)),
                n_clusters=0,
                localization_fraction=0.5,
                snr_db_values=(40.0, 50.0, 60.0),
                trials=20,
                strategies=()
            )
        case "fig4" | "run":
            return ScenarioConfig(
                n_antennas=512 if paper_scale else 128,
                trials=100 if paper_scale else 50
            )
        case "fig5":
            return ScenarioConfig(
                n_antennas=512 if paper_scale else 128,
                noise_mode=NoiseMode.PHYSICAL,
                power_dbm=23.0,
                trials=100 if paper_scale else 50
            )
        case _:
            raise ConfigurationError(f"unknown experiment '{name}'")
