from dataclasses import dataclass

import numpy as np
import scipy.linalg

from pynearfield.core.exceptions import ConfigurationError, EigenDecompositionError


@dataclass(frozen=True)
class SubspacePair:
    """
    Eigendecomposition of a sample covariance split into signal and noise
    subspaces.

    Attributes
    ----------
    eigenvalues: np.ndarray
        Real eigenvalues in descending order (length N).
    eigenvectors: np.ndarray
        N×N unitary matrix; column i belongs to eigenvalue i.
    n_sources: int
        Number K of sources; the first K columns span the signal subspace.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    n_sources: int

    def __post_init__(self) -> None:
        n = self.eigenvectors.shape[0]
        if not 0 <= self.n_sources < n:
            raise ConfigurationError(
                f"number of sources must lie in [0, {n}), got {self.n_sources}"
            )

    @property
    def n_antennas(self) -> int:
        return self.eigenvectors.shape[0]

    @property
    def signal_basis(self) -> np.ndarray:
        """N×K matrix U_s."""
        return self.eigenvectors[:, :self.n_sources]

    @property
    def noise_basis(self) -> np.ndarray:
        """N×(N-K) matrix U_n."""
        return self.eigenvectors[:, self.n_sources:]


def sample_covariance(Y_loc: np.ndarray, tau_loc: int | None = None) -> np.ndarray:
    """Returns R = (1/τ)·Y·Yᴴ.

    Raises
    ------
    ConfigurationError
        If τ is zero or does not match the number of columns of `Y_loc`.
    """
    tau = Y_loc.shape[1] if tau_loc is None else tau_loc
    if tau <= 0:
        raise ConfigurationError("sample covariance needs at least one snapshot")
    if tau != Y_loc.shape[1]:
        raise ConfigurationError(f"τ = {tau} does not match {Y_loc.shape[1]} snapshots")
    R = Y_loc @ Y_loc.conj().T / tau
    # Exact Hermitian symmetry.
    return (R + R.conj().T) / 2


def hermitian_eigendecomposition(R: np.ndarray, n_sources: int) -> SubspacePair:
    """Eigendecomposition of the Hermitian matrix `R`, eigenvalues sorted in
    descending order.

    `R` is symmetrized as (R + Rᴴ)/2 first. Eigenvectors of zero eigenvalues
    (rank-deficient R) are still orthonormal and serve as noise directions.

    Raises
    ------
    EigenDecompositionError
        If `R` has non-finite entries or the solver fails.
    """
    R = np.asarray(R, dtype=complex)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ConfigurationError(f"covariance must be square, got shape {R.shape}")
    if not np.all(np.isfinite(R)):
        raise EigenDecompositionError("covariance matrix has non-finite entries")
    R = (R + R.conj().T) / 2
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(R)
    except (np.linalg.LinAlgError, ValueError) as error:
        raise EigenDecompositionError(f"eigendecomposition failed: {error}") from error
    # eigh returns ascending eigenvalues.
    return SubspacePair(eigenvalues[::-1].copy(), eigenvectors[:, ::-1].copy(), n_sources)
