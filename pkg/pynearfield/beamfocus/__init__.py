"""
Receive combining: zero forcing on channel estimates or on the steering
vectors of estimated locations, SINR and sum spectral efficiency.
"""

from pynearfield.beamfocus.combiners import BasisKind, CombinerMatrix, zf_combiner, localization_combiner
from pynearfield.beamfocus.metrics import SeReport, sinr, sinrs, sum_se
from pynearfield.beamfocus.strategies import (
    TrialContext,
    CombinerChoice,
    CombiningStrategy,
    PerfectCsiZF,
    PilotLsZF,
    PerfectLocalization,
    MusicLocalization,
    STRATEGY_NAMES,
    make_strategy
)

__all__ = [
    "BasisKind",
    "CombinerMatrix",
    "zf_combiner",
    "localization_combiner",
    "SeReport",
    "sinr",
    "sinrs",
    "sum_se",
    "TrialContext",
    "CombinerChoice",
    "CombiningStrategy",
    "PerfectCsiZF",
    "PilotLsZF",
    "PerfectLocalization",
    "MusicLocalization",
    "STRATEGY_NAMES",
    "make_strategy",
]
