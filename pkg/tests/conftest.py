import numpy as np
import pytest

from pynearfield.core.geometry import CarrierConfig, UlaGeometry


@pytest.fixture
def carrier() -> CarrierConfig:
    return CarrierConfig(100e9)


@pytest.fixture
def ula16(carrier) -> UlaGeometry:
    return UlaGeometry.from_wavelengths(16, 0.5, carrier)


@pytest.fixture
def ula64(carrier) -> UlaGeometry:
    return UlaGeometry.from_wavelengths(64, 0.5, carrier)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def random_unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return u / np.linalg.norm(u)
