"""
Combining strategies compared in the sum-SE experiments.

A strategy turns the shared state of one trial (the `TrialContext`) into a
combining matrix and the number of pilot symbols it spent. Strategies are
registered by name so that configurations and CLI arguments can refer to
them.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
import logging

import numpy as np

from pynearfield.core.channel import ChannelRealization
from pynearfield.core.exceptions import ConfigurationError
from pynearfield.core.geometry import PolarLocation
from pynearfield.core.signaling import (
    NoiseModel,
    dft_pilot_book,
    received_pilot_matrix,
    ls_estimates
)
from pynearfield.music import MusicGrid, MusicResult, localize
from .combiners import BasisKind, CombinerMatrix, zf_combiner, localization_combiner


class TrialContext:
    """
    Everything the strategies of one trial share: the true channels, the
    powers and noise, the pilot lengths, and the random streams of the pilot
    and localization noise. Received pilot matrices are drawn once and cached,
    so strategies that use the same pilots see the same noise.
    """

    def __init__(
        self,
        realization: ChannelRealization,
        powers: np.ndarray,
        noise: NoiseModel,
        tau_pil: int,
        tau_loc: int,
        pilot_rng: np.random.Generator,
        localization_rng: np.random.Generator,
        grids: dict[str, MusicGrid] | None = None,
        min_separation: int = 3,
        spectrum_workers: int = 1
    ) -> None:
        self.realization = realization
        self.powers = np.broadcast_to(np.asarray(powers, dtype=float), (realization.n_users,))
        self.noise = noise
        self.tau_pil = tau_pil
        self.tau_loc = tau_loc
        self._pilot_rng = pilot_rng
        self._localization_rng = localization_rng
        self.grids = grids or {}
        self.min_separation = min_separation
        self.spectrum_workers = spectrum_workers

    @property
    def users(self) -> tuple[PolarLocation, ...]:
        return self.realization.users

    @cached_property
    def pilot_signal(self) -> np.ndarray:
        pilots = dft_pilot_book(self.tau_pil, self.realization.n_users)
        return received_pilot_matrix(self.realization, pilots, self.powers, self.noise, self._pilot_rng)

    @cached_property
    def localization_signal(self) -> np.ndarray:
        pilots = dft_pilot_book(self.tau_loc, self.realization.n_users)
        return received_pilot_matrix(
            self.realization, pilots, self.powers, self.noise, self._localization_rng
        )


@dataclass(frozen=True)
class CombinerChoice:
    combiner: CombinerMatrix
    overhead_len: int
    music: MusicResult | None = None

    @property
    def estimates(self) -> tuple[PolarLocation, ...] | None:
        return self.music.estimates if self.music is not None else None


class CombiningStrategy(ABC):
    """
    Abstract base class for a receive combining strategy.
    """
    name: str = ""

    def __init__(self, logger: logging.Logger | None = None) -> None:
        self.logger = logger or logging.getLogger(__name__)

    @abstractmethod
    def build(self, context: TrialContext) -> CombinerChoice:
        """
        Build the combiner of one trial.

        Parameters
        ----------
        context : TrialContext
            Shared state of the trial.

        Returns
        -------
        CombinerChoice
            The combining matrix and the pilot overhead it costs.
        """
        pass


class PerfectCsiZF(CombiningStrategy):
    """ZF on the true channels; an idealized bound without overhead."""
    name = "zf-perfect-csi"

    def build(self, context: TrialContext) -> CombinerChoice:
        return CombinerChoice(zf_combiner(context.realization.channels, BasisKind.PERFECT_CSI), 0)


class PilotLsZF(CombiningStrategy):
    """ZF on LS channel estimates from τ_Pil orthogonal DFT pilots."""
    name = "zf-pilot-ls"

    def build(self, context: TrialContext) -> CombinerChoice:
        pilots = dft_pilot_book(context.tau_pil, context.realization.n_users)
        estimates = ls_estimates(context.pilot_signal, pilots, context.powers)
        return CombinerChoice(zf_combiner(estimates, BasisKind.PILOT_LS), context.tau_pil)


class PerfectLocalization(CombiningStrategy):
    """Beam focusing on the true user locations; no overhead."""
    name = "loc-perfect"

    def build(self, context: TrialContext) -> CombinerChoice:
        r = context.realization
        combiner = localization_combiner(
            list(r.users), r.carrier, r.geometry, BasisKind.PERFECT_LOCALIZATION
        )
        return CombinerChoice(combiner, 0)


class MusicLocalization(CombiningStrategy):
    """
    Beam focusing on the 2D-MUSIC estimates obtained from τ_Loc localization
    pilots, searched on the context grid registered under `grid_name`.
    """

    def __init__(self, name: str, grid_name: str, logger: logging.Logger | None = None) -> None:
        super().__init__(logger)
        self.name = name
        self.grid_name = grid_name

    def build(self, context: TrialContext) -> CombinerChoice:
        r = context.realization
        result = localize(
            context.localization_signal,
            r.n_users,
            context.grids[self.grid_name],
            r.carrier,
            r.geometry,
            true_locations=list(r.users),
            min_separation=context.min_separation,
            workers=context.spectrum_workers
        )
        combiner = localization_combiner(list(result.estimates), r.carrier, r.geometry)
        self.logger.debug(
            f"{self.name}: " + ", ".join(
                f"user {k} at ({e.r:.3f} m, {e.theta_deg:.2f}°)" for k, e in enumerate(result.estimates)
            )
        )
        return CombinerChoice(combiner, context.tau_loc, result)


FINE_GRID = "fine"
COARSE_GRID = "coarse"

STRATEGY_NAMES = ("zf-perfect-csi", "zf-pilot-ls", "loc-perfect", "loc-fine", "loc-coarse")


def make_strategy(name: str) -> CombiningStrategy:
    """Returns the strategy registered under `name`."""
    match name:
        case "zf-perfect-csi":
            return PerfectCsiZF()
        case "zf-pilot-ls":
            return PilotLsZF()
        case "loc-perfect":
            return PerfectLocalization()
        case "loc-fine":
            return MusicLocalization("loc-fine", FINE_GRID)
        case "loc-coarse":
            return MusicLocalization("loc-coarse", COARSE_GRID)
        case _:
            raise ConfigurationError(
                f"unknown strategy '{name}', expected one of {', '.join(STRATEGY_NAMES)}"
            )
