import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import random_unit_vector
from pynearfield.analysis import (
    NoiseVectorPhases,
    denom_two_antenna,
    closed_form_distance_n2,
    m_lower_bound,
    psi,
    path_difference_m_range,
    select_m,
    brute_force_distance,
    denom_three_antenna,
    local_minima,
    deepest_minima,
    minimum_prominence
)
from pynearfield.core.exceptions import ConfigurationError, InvalidMError
from pynearfield.core.geometry import UlaGeometry, PolarLocation, steering_vector


def music_denominator(u, carrier, geom, r, theta):
    return abs(np.vdot(u, steering_vector(carrier, PolarLocation(r, theta), geom))) ** 2


def orthogonal_noise_vector(carrier, geom, r, theta):
    b = steering_vector(carrier, PolarLocation(r, theta), geom)
    return np.array([b[0], -b[1]]) / math.sqrt(2)


def test_two_antenna_denominator_matches_music(carrier, rng):
    d = 9 * carrier.lambda_c
    geom = UlaGeometry(2, d)
    for _ in range(10):
        u = random_unit_vector(rng, 2)
        r, theta = rng.uniform(0.02, 0.5), rng.uniform(-1.2, 1.2)
        phases = NoiseVectorPhases.from_vector(u)
        assert denom_two_antenna(phases, r, theta, d, carrier) == pytest.approx(
            music_denominator(u, carrier, geom, r, theta), abs=1e-9
        )


def test_three_antenna_denominator_matches_music(carrier, rng):
    d = 9 * carrier.lambda_c
    geom = UlaGeometry(3, d)
    r_values = np.linspace(0.05, 1.9, 7)
    for _ in range(10):
        u = random_unit_vector(rng, 3)
        theta = rng.uniform(-1.2, 1.2)
        phases = NoiseVectorPhases.from_vector(u)
        expected = [music_denominator(u, carrier, geom, r, theta) for r in r_values]
        assert_allclose(denom_three_antenna(phases, r_values, theta, d, carrier), expected, atol=1e-9)


def test_m_lower_bound(carrier):
    assert m_lower_bound(9 * carrier.lambda_c, carrier) == 8
    assert m_lower_bound(0.5 * carrier.lambda_c, carrier) == 0
    with pytest.raises(ConfigurationError):
        m_lower_bound(0.0, carrier)


def test_closed_form_recovers_noiseless_distance(carrier):
    d = 9 * carrier.lambda_c
    geom = UlaGeometry(2, d)
    r, theta = 16.2 * carrier.lambda_c, math.radians(30.0)
    phases = NoiseVectorPhases.from_vector(orthogonal_noise_vector(carrier, geom, r, theta))
    estimates = []
    for m in range(0, 8):
        try:
            estimates.append(closed_form_distance_n2(phases, theta, d, carrier, m))
        except InvalidMError:
            continue
    assert any(abs(e - r) <= 1e-6 * r for e in estimates)


def test_select_m_with_distance_hint(carrier):
    d = 9 * carrier.lambda_c
    geom = UlaGeometry(2, d)
    r, theta = 16.2 * carrier.lambda_c, math.radians(30.0)
    phases = NoiseVectorPhases.from_vector(orthogonal_noise_vector(carrier, geom, r, theta))
    m, r_hat = select_m(phases, theta, d, carrier, search_width=8, m_min=0, r_hint=r)
    assert r_hat == pytest.approx(r, rel=1e-6)
    assert denom_two_antenna(phases, r_hat, theta, d, carrier) == pytest.approx(0.0, abs=1e-9)


def test_selected_distance_is_a_spectrum_minimum(carrier, rng):
    d = 9 * carrier.lambda_c
    theta = math.radians(30.0)
    lam = carrier.lambda_c
    for _ in range(50):
        phases = NoiseVectorPhases.from_vector(random_unit_vector(rng, 2))
        _, r_hat = select_m(phases, theta, d, carrier, m_min=0)
        m1, m2 = phases.magnitudes
        assert denom_two_antenna(phases, r_hat, theta, d, carrier) == pytest.approx((m1 - m2) ** 2, abs=1e-9)
        if r_hat < 50 * lam:
            window = r_hat + np.arange(-200, 201) * lam / 100
            window = window[window > 0]
            brute = window[np.argmin(denom_two_antenna(phases, window, theta, d, carrier))]
            assert abs(brute - r_hat) <= lam / 50


def test_broadside_spectrum_does_not_depend_on_distance(carrier, rng):
    d = 9 * carrier.lambda_c
    phases = NoiseVectorPhases.from_vector(random_unit_vector(rng, 2))
    values = denom_two_antenna(phases, np.linspace(0.01, 1.0, 20), 0.0, d, carrier)
    assert_allclose(values, values[0], atol=1e-12)


def test_invalid_m_raises(carrier):
    d = 9 * carrier.lambda_c
    theta = math.radians(30.0)
    # Ψ = 7λ lies between d·sinθ and d: no real distance.
    phases = NoiseVectorPhases((1 / math.sqrt(2),) * 2, (math.pi / 2, -math.pi / 2))
    with pytest.raises(InvalidMError):
        closed_form_distance_n2(phases, theta, d, carrier, 6)
    with pytest.raises(ConfigurationError):
        select_m(phases, theta, d, carrier, search_width=0)


def test_select_m_raises_when_every_candidate_is_invalid(carrier):
    d = 9 * carrier.lambda_c
    theta = math.radians(30.0)
    phases = NoiseVectorPhases((1 / math.sqrt(2),) * 2, (math.pi / 2, -math.pi / 2))
    with pytest.raises(InvalidMError):
        select_m(phases, theta, d, carrier, search_width=2, m_min=5)


def test_noise_vector_phases_round_trip(rng):
    u = random_unit_vector(rng, 3)
    assert_allclose(NoiseVectorPhases.from_vector(u).as_vector(), u, atol=1e-12)
    with pytest.raises(ConfigurationError):
        denom_two_antenna(NoiseVectorPhases.from_vector(u), 1.0, 0.0, 1e-3, None)


def test_local_minima():
    profile = np.array([3.0, 1.0, 2.0, 0.5, 0.5, 4.0, 0.2, 1.0])
    assert list(local_minima(profile)) == [1, 6]
    assert list(deepest_minima(profile, 2)) == [6, 1]
    assert list(deepest_minima(profile, 5)) == [6, 1]
    assert local_minima(np.array([1.0, 0.0])).size == 0


def test_minimum_prominence():
    profile = np.array([3.0, 1.0, 2.0, 0.5, 0.5, 4.0, 0.2, 1.0])
    assert minimum_prominence(profile, 1) == pytest.approx(2.0)
    assert minimum_prominence(profile, 6) == pytest.approx(5.0)
    assert list(deepest_minima(profile, 2, min_prominence=4.0)) == [6]
    assert deepest_minima(profile, 2, min_prominence=10.0).size == 0
    assert minimum_prominence(np.array([1.0, 0.0, 1.0]), 1) == math.inf


def test_psi_phase_difference_is_wrapped(carrier):
    lam = carrier.lambda_c
    assert psi(NoiseVectorPhases((0.5, 0.5), (0.3, 0.3)), carrier, 0) == pytest.approx(1.5 * lam)
    assert psi(NoiseVectorPhases((0.5, 0.5), (0.0, math.pi / 2)), carrier, 0) == pytest.approx(0.75 * lam)
    assert psi(NoiseVectorPhases((0.5, 0.5), (math.pi / 2, -math.pi / 2)), carrier, 6) == pytest.approx(7 * lam)


def test_path_difference_m_range(carrier, rng):
    d = 9 * carrier.lambda_c
    for theta in (math.radians(30.0), math.radians(-50.0)):
        limit = d * abs(math.sin(theta))
        phases = NoiseVectorPhases.from_vector(random_unit_vector(rng, 2))
        physical = path_difference_m_range(phases, theta, d, carrier)
        assert len(physical) > 0
        assert all(abs(psi(phases, carrier, m)) < limit for m in physical)
        assert abs(psi(phases, carrier, physical.start - 1)) >= limit
        assert abs(psi(phases, carrier, physical.stop)) >= limit
    assert len(path_difference_m_range(phases, 0.0, d, carrier)) == 0


def test_select_m_default_window_recovers_noiseless_distance(carrier):
    d = 9 * carrier.lambda_c
    geom = UlaGeometry(2, d)
    r, theta = 16.2 * carrier.lambda_c, math.radians(30.0)
    phases = NoiseVectorPhases.from_vector(orthogonal_noise_vector(carrier, geom, r, theta))
    m, r_hat = select_m(phases, theta, d, carrier)
    assert r_hat == pytest.approx(r, rel=1e-6)
    assert m in path_difference_m_range(phases, theta, d, carrier)
    assert m < m_lower_bound(d, carrier)


def test_brute_force_distance(carrier):
    d = 9 * carrier.lambda_c
    lam = carrier.lambda_c
    geom = UlaGeometry(2, d)
    r, theta = 16.2 * lam, math.radians(30.0)
    phases = NoiseVectorPhases.from_vector(orthogonal_noise_vector(carrier, geom, r, theta))
    r_values = np.arange(12.0, 20.0, 0.01) * lam
    assert abs(brute_force_distance(phases, theta, d, carrier, r_values) - r) <= lam / 50
    assert brute_force_distance(phases, 0.0, d, carrier, r_values) is None
