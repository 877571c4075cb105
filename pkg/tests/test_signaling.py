import numpy as np
import pytest
from numpy.testing import assert_allclose

from pynearfield.core.channel import realize_channel
from pynearfield.core.exceptions import ConfigurationError
from pynearfield.core.geometry import PolarLocation, fraunhofer_distance
from pynearfield.core.signaling import (
    NoiseModel,
    dft_pilot_book,
    pilot_lengths,
    noiseless_pilot_matrix,
    received_pilot_matrix,
    ls_estimate,
    ls_estimates,
    round_half_up
)


@pytest.fixture
def channels(carrier, ula16, rng):
    rf = fraunhofer_distance(ula16, carrier)
    users = [PolarLocation(rf / 8, 0.0), PolarLocation(rf / 2, 0.3)]
    return realize_channel(users, [], carrier, ula16, rng)


def test_dft_pilots_are_orthogonal():
    pilots = dft_pilot_book(25, 2)
    gram = pilots.matrix.conj().T @ pilots.matrix
    assert_allclose(gram, 25 * np.eye(2), atol=1e-12)
    assert_allclose(pilots.pilot(0), np.ones(25))


def test_dft_pilots_need_enough_symbols():
    with pytest.raises(ConfigurationError):
        dft_pilot_book(1, 2)


@pytest.mark.parametrize("T, expected", [(5000, (1000, 25)), (1000, (200, 5)), (400, (80, 2))])
def test_pilot_lengths(T, expected):
    assert pilot_lengths(T, 2) == expected


def test_pilot_lengths_shorter_than_users_are_rejected():
    with pytest.raises(ConfigurationError, match="τ_Loc"):
        pilot_lengths(100, 2)
    with pytest.raises(ConfigurationError, match="τ_Pil"):
        pilot_lengths(1000, 4, pilot_fraction=0.001)


def test_round_half_up():
    assert round_half_up(2.5) == 3
    assert round_half_up(3.5) == 4
    assert round_half_up(2.49) == 2


def test_physical_noise_power():
    noise = NoiseModel.from_noise_figure(13.0, 1e8)
    assert noise.sigma_sq_dbm == pytest.approx(-81.0)
    with pytest.raises(ConfigurationError):
        NoiseModel(-1.0)


def test_noiseless_ls_recovers_channels(channels, rng):
    pilots = dft_pilot_book(20, 2)
    powers = np.array([100.0, 10.0])
    Y = received_pilot_matrix(channels, pilots, powers, NoiseModel(0.0), rng)
    assert_allclose(Y, noiseless_pilot_matrix(channels, pilots, powers))
    assert_allclose(ls_estimates(Y, pilots, powers), channels.channels, atol=1e-15)


def test_ls_error_variance(rng):
    n, tau, rho, sigma_sq = 8, 10, 4.0, 2.0
    h = np.ones((n, 1), dtype=complex)
    pilots = dft_pilot_book(tau, 1)
    errors = []
    for _ in range(4000):
        Y = received_pilot_matrix(h, pilots, [rho], NoiseModel(sigma_sq), rng)
        errors.append(np.sum(np.abs(ls_estimate(Y, pilots.pilot(0), rho, tau) - h[:, 0]) ** 2))
    assert np.mean(errors) == pytest.approx(n * sigma_sq / (rho * tau), rel=0.05)


def test_received_pilots_are_reproducible(channels):
    pilots = dft_pilot_book(10, 2)
    draws = [
        received_pilot_matrix(channels, pilots, 1.0, NoiseModel(1.0), np.random.default_rng(3))
        for _ in range(2)
    ]
    assert np.array_equal(draws[0], draws[1])


def test_ls_estimate_rejects_invalid_arguments(channels):
    pilots = dft_pilot_book(10, 2)
    Y = noiseless_pilot_matrix(channels, pilots, 1.0)
    with pytest.raises(ConfigurationError):
        ls_estimate(Y, pilots.pilot(0), 0.0, 10)
    with pytest.raises(ConfigurationError):
        ls_estimate(Y, pilots.pilot(0), 1.0, 9)


def test_pilot_book_must_match_users(channels):
    with pytest.raises(ConfigurationError):
        noiseless_pilot_matrix(channels, dft_pilot_book(10, 3), 1.0)


def test_ls_estimates_are_unbiased(channels, rng):
    pilots = dft_pilot_book(10, 2)
    powers, sigma_sq, draws = np.array([4.0, 1.0]), 2.0, 4000
    total = np.zeros_like(channels.channels)
    for _ in range(draws):
        Y = received_pilot_matrix(channels, pilots, powers, NoiseModel(sigma_sq), rng)
        total += ls_estimates(Y, pilots, powers)
    error = np.abs(total / draws - channels.channels)
    # Per-entry estimation error variance is σ²/(ρ_k·τ).
    spread = np.sqrt(sigma_sq / (powers * pilots.length * draws))
    assert np.all(error <= 5 * spread[np.newaxis, :])
