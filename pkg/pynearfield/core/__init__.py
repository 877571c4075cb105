"""
Core components of the near-field uplink model.

This module exposes the array geometry, the LoS + clustered NLoS channel, the
pilot signaling with LS estimation, seeded random streams and the exception
hierarchy.
"""

from pynearfield.core.geometry import (
    SPEED_OF_LIGHT,
    CarrierConfig,
    UlaGeometry,
    PolarLocation,
    fraunhofer_distance,
    element_distance,
    element_distances,
    steering_vector,
    steering_matrix,
    far_field_steering_vector
)
from pynearfield.core.channel import (
    Cluster,
    ChannelRealization,
    reflection_coefficient_db,
    draw_clusters,
    realize_channel,
    normalize_realization,
    nlos_to_los_ratio
)
from pynearfield.core.signaling import (
    PilotBook,
    NoiseModel,
    dft_pilot_book,
    pilot_lengths,
    received_pilot_matrix,
    ls_estimate,
    ls_estimates
)
from pynearfield.core.exceptions import (
    NearFieldError,
    ConfigurationError,
    NumericalError,
    SingularBasisError,
    EigenDecompositionError,
    PeakSearchError,
    InvalidMError,
    DegenerateCombinerError
)

__all__ = [
    "SPEED_OF_LIGHT",
    "CarrierConfig",
    "UlaGeometry",
    "PolarLocation",
    "fraunhofer_distance",
    "element_distance",
    "element_distances",
    "steering_vector",
    "steering_matrix",
    "far_field_steering_vector",
    "Cluster",
    "ChannelRealization",
    "reflection_coefficient_db",
    "draw_clusters",
    "realize_channel",
    "normalize_realization",
    "nlos_to_los_ratio",
    "PilotBook",
    "NoiseModel",
    "dft_pilot_book",
    "pilot_lengths",
    "received_pilot_matrix",
    "ls_estimate",
    "ls_estimates",
    "NearFieldError",
    "ConfigurationError",
    "NumericalError",
    "SingularBasisError",
    "EigenDecompositionError",
    "PeakSearchError",
    "InvalidMError",
    "DegenerateCombinerError"
]
