"""
Tractable analyses of the 2D-MUSIC spectrum: the closed-form two-antenna
distance estimator with its M bound, the three-antenna two-user spectrum
denominator, and the Gamma and power-law fits of the estimation error.
"""

from pynearfield.analysis.two_antenna import (
    NoiseVectorPhases,
    denom_two_antenna,
    closed_form_distance_n2,
    m_lower_bound,
    psi,
    path_difference_m_range,
    select_m,
    brute_force_distance
)
from pynearfield.analysis.three_antenna import (
    denom_three_antenna,
    local_minima,
    deepest_minima,
    minimum_prominence
)
from pynearfield.analysis.fitting import GammaFit, PowerLawFit, gamma_fit, variance_power_law_fit

__all__ = [
    "NoiseVectorPhases",
    "denom_two_antenna",
    "closed_form_distance_n2",
    "m_lower_bound",
    "psi",
    "path_difference_m_range",
    "select_m",
    "brute_force_distance",
    "denom_three_antenna",
    "local_minima",
    "deepest_minima",
    "minimum_prominence",
    "GammaFit",
    "PowerLawFit",
    "gamma_fit",
    "variance_power_law_fit",
]
