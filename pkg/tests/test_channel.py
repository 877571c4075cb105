import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import stats

from pynearfield.core.channel import (
    Cluster,
    reflection_coefficient_db,
    los_amplitude,
    los_matrix,
    draw_clusters,
    realize_channel,
    normalize_realization,
    nlos_to_los_ratio
)
from pynearfield.core.exceptions import ConfigurationError
from pynearfield.core.geometry import CarrierConfig, PolarLocation, fraunhofer_distance
from pynearfield.core.rng import substream, complex_normal, CHANNEL


@pytest.fixture
def users(carrier, ula16):
    rf = fraunhofer_distance(ula16, carrier)
    return [PolarLocation(rf / 8, 0.0), PolarLocation(rf / 2, 0.0)]


def test_reflection_coefficient():
    assert reflection_coefficient_db(100e9) == pytest.approx(-9.12)
    assert reflection_coefficient_db(10e9) == pytest.approx(-8.274)


def test_perfect_reflection_cluster(carrier):
    cluster = Cluster.at(PolarLocation(0.1, 0.2), carrier, perfect_reflection=True)
    assert cluster.reflection_db == 0.0
    assert cluster.large_scale_gamma_sq == pytest.approx(los_amplitude(0.1, carrier) ** 2)


def test_clusters_lie_between_array_and_farthest_user(carrier, users, rng):
    clusters = draw_clusters(50, users, carrier, rng)
    r = np.array([c.location.r for c in clusters])
    theta = np.array([c.location.theta for c in clusters])
    assert np.all(r >= 10 * carrier.lambda_c)
    assert np.all(r <= users[1].r)
    assert np.all(np.abs(theta) <= math.pi / 2)
    assert draw_clusters(0, users, carrier, rng) == []


def test_clusters_need_a_user_beyond_minimum_distance(carrier, rng):
    with pytest.raises(ConfigurationError):
        draw_clusters(2, [PolarLocation(5 * carrier.lambda_c, 0.0)], carrier, rng)


def test_pure_los_channel(carrier, ula16, users, rng):
    realization = realize_channel(users, [], carrier, ula16, rng)
    assert realization.channels.shape == (16, 2)
    assert realization.nlos_coeffs.shape == (2, 0)
    assert_allclose(realization.channels, los_matrix(users, carrier, ula16))
    norms = np.linalg.norm(realization.channels, axis=0)
    expected = [math.sqrt(16) * los_amplitude(u.r, carrier) for u in users]
    assert_allclose(norms, expected, rtol=1e-12)


def test_realization_is_reproducible_and_reconstructible(carrier, ula16, users):
    draws = []
    for _ in range(2):
        stream = substream(7, 3, CHANNEL)
        clusters = draw_clusters(2, users, carrier, stream)
        draws.append(realize_channel(users, clusters, carrier, ula16, stream))
    assert np.array_equal(draws[0].channels, draws[1].channels)
    assert_allclose(draws[0].reconstruct(), draws[0].channels, atol=1e-15)


def test_normalization_gives_unit_reference_norm(carrier, ula16, users, rng):
    clusters = draw_clusters(2, users, carrier, rng)
    realization = normalize_realization(realize_channel(users, clusters, carrier, ula16, rng))
    assert np.linalg.norm(realization.channels[:, 0]) == pytest.approx(1.0)
    assert_allclose(realization.reconstruct(), realization.channels, atol=1e-12)
    with pytest.raises(ConfigurationError):
        normalize_realization(realization, reference_user=2)


def test_complex_normal_variance(rng):
    z = complex_normal(rng, (200_000,), 2.5)
    assert np.mean(np.abs(z) ** 2) == pytest.approx(2.5, rel=0.02)
    assert abs(np.mean(z)) < 0.02
    assert np.mean(z.real ** 2) == pytest.approx(np.mean(z.imag ** 2), rel=0.03)


def test_substreams_are_independent_of_order():
    first = substream(11, 5, CHANNEL).standard_normal(4)
    substream(11, 4, CHANNEL).standard_normal(100)
    again = substream(11, 5, CHANNEL).standard_normal(4)
    assert np.array_equal(first, again)
    assert not np.array_equal(first, substream(11, 6, CHANNEL).standard_normal(4))


def test_nlos_ratio_decreases_with_frequency():
    ratios = []
    for fc_ghz in range(10, 101, 10):
        carrier = CarrierConfig.from_ghz(fc_ghz)
        lam = carrier.lambda_c
        user = PolarLocation(400 * lam, 0.0)
        clusters = [Cluster.at(PolarLocation(r * lam, 0.3), carrier) for r in (50.0, 200.0)]
        ratios.append(nlos_to_los_ratio(user, clusters, carrier))
    assert all(b < a for a, b in zip(ratios, ratios[1:]))


def test_cluster_locations_are_uniform(carrier, users):
    clusters = draw_clusters(2000, users, carrier, np.random.default_rng(5))
    r = np.array([c.location.r for c in clusters])
    theta = np.array([c.location.theta for c in clusters])
    r_low = 10 * carrier.lambda_c
    assert stats.kstest(r, "uniform", args=(r_low, users[1].r - r_low)).pvalue > 0.01
    assert stats.kstest(theta, "uniform", args=(-math.pi / 2, math.pi)).pvalue > 0.01


def test_ensemble_mean_channel_is_los(carrier, ula16, users, rng):
    clusters = draw_clusters(2, users, carrier, rng)
    draws = np.stack([realize_channel(users, clusters, carrier, ula16, rng).channels for _ in range(4000)])
    spread = np.sqrt(np.mean(np.abs(draws - draws.mean(axis=0)) ** 2, axis=0))
    error = np.abs(draws.mean(axis=0) - los_matrix(users, carrier, ula16))
    assert np.all(error <= 5 * spread / math.sqrt(draws.shape[0]))
