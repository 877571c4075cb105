from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from pynearfield.core.exceptions import ConfigurationError, SingularBasisError
from pynearfield.core.geometry import CarrierConfig, UlaGeometry, PolarLocation, steering_vector


MAX_GRAM_CONDITION = 1e12


class BasisKind(str, Enum):
    PERFECT_CSI = "perfect-CSI"
    PILOT_LS = "pilot-LS"
    LOCALIZATION = "localization"
    PERFECT_LOCALIZATION = "perfect-localization"


@dataclass(frozen=True)
class CombinerMatrix:
    """
    Receive combining matrix W = [w_1 … w_K].

    Attributes
    ----------
    columns: np.ndarray
        N×K complex matrix.
    basis_kind: BasisKind
        What the basis B̂ was built from.
    """
    columns: np.ndarray
    basis_kind: BasisKind

    @property
    def n_users(self) -> int:
        return self.columns.shape[1]

    def column(self, k: int) -> np.ndarray:
        return self.columns[:, k]


def zf_combiner(basis: np.ndarray, basis_kind: BasisKind = BasisKind.PERFECT_CSI) -> CombinerMatrix:
    """Zero-forcing combiner W = B̂(B̂ᴴB̂)⁻¹, so that B̂ᴴW = I_K.

    The Gram matrix is solved through a Cholesky factorization; no
    regularization is applied.

    Raises
    ------
    SingularBasisError
        If the Gram matrix has a condition number above 1e12 (or is not
        positive definite).
    """
    basis = np.asarray(basis, dtype=complex)
    if basis.ndim != 2 or basis.shape[1] > basis.shape[0]:
        raise ConfigurationError(f"ZF basis must be N×K with K ≤ N, got shape {basis.shape}")
    gram = basis.conj().T @ basis
    condition = np.linalg.cond(gram)
    if not np.isfinite(condition) or condition > MAX_GRAM_CONDITION:
        raise SingularBasisError(float(condition))
    try:
        factor = scipy.linalg.cho_factor(gram)
    except np.linalg.LinAlgError as error:
        raise SingularBasisError(float(condition)) from error
    # W = B G⁻¹ and G is Hermitian, so Wᴴ = G⁻¹Bᴴ.
    columns = scipy.linalg.cho_solve(factor, basis.conj().T).conj().T
    return CombinerMatrix(columns, BasisKind(basis_kind))


def localization_combiner(
    estimates: list[PolarLocation],
    carrier: CarrierConfig,
    geom: UlaGeometry,
    basis_kind: BasisKind = BasisKind.LOCALIZATION
) -> CombinerMatrix:
    """ZF combiner whose basis is B̂ = [b(r̂_1, θ̂_1), …, b(r̂_K, θ̂_K)].

    Raises
    ------
    SingularBasisError
        If estimates coincide (or are too close to be separated).
    """
    if not estimates:
        raise ConfigurationError("at least one location estimate is required")
    basis = np.stack([steering_vector(carrier, loc, geom) for loc in estimates], axis=1)
    return zf_combiner(basis, basis_kind)
