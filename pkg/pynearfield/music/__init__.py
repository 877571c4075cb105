"""
2D-MUSIC near-field localization: sample covariance, subspaces, spectrum over
an (r, θ) grid, peak selection and user association.
"""

from pynearfield.music.grid import MusicGrid
from pynearfield.music.subspace import SubspacePair, sample_covariance, hermitian_eigendecomposition
from pynearfield.music.spectrum import spectrum_denominator, music_spectrum
from pynearfield.music.peaks import find_peaks, find_peak_indices, associate_estimates
from pynearfield.music.localizer import MusicResult, localize

__all__ = [
    "MusicGrid",
    "SubspacePair",
    "sample_covariance",
    "hermitian_eigendecomposition",
    "spectrum_denominator",
    "music_spectrum",
    "find_peaks",
    "find_peak_indices",
    "associate_estimates",
    "MusicResult",
    "localize",
]
