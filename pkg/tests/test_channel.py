import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thzce.channel import (
    draw_channel,
    element_offsets,
    far_steering,
    near_distance_bounds,
    near_element_distances,
    near_steering,
    rayleigh_distance,
    rebuild_channel,
)
from thzce.config import ScenarioConfig
from thzce.errors import ConfigurationError
from thzce.rng import derive

F = 1e11
C = 3e8
D = 0.0015


class TestFarSteering:
    def test_broadside_all_equal(self):
        a = far_steering(0.0, 4)
        np.testing.assert_allclose(a, np.full(4, 0.5 + 0j), atol=1e-15)

    def test_thirty_degrees(self):
        # sin(pi/6) = 1/2, so phases step by pi/2: (1/2)[1, j, -1, -j]
        a = far_steering(np.pi / 6, 4)
        np.testing.assert_allclose(a, 0.5 * np.array([1, 1j, -1, -1j]), atol=1e-12)

    def test_negative_angle_is_conjugate(self):
        np.testing.assert_allclose(
            far_steering(-np.pi / 6, 4), np.conj(far_steering(np.pi / 6, 4)), atol=1e-15
        )

    @settings(max_examples=50, deadline=None)
    @given(
        theta=st.floats(-np.pi / 2, np.pi / 2),
        n=st.integers(min_value=1, max_value=128),
    )
    def test_unit_norm(self, theta, n):
        assert abs(np.linalg.norm(far_steering(theta, n)) - 1.0) < 1e-12


class TestNearGeometry:
    def test_element_offsets(self):
        np.testing.assert_array_equal(element_offsets(4), [-1.5, -0.5, 0.5, 1.5])
        np.testing.assert_array_equal(element_offsets(3), [-1.0, 0.0, 1.0])

    def test_broadside_distances(self):
        xi = near_element_distances(10.0, 0.0, 2, D)
        expected = math.sqrt(10.0**2 + (0.5 * D) ** 2)  # ~10.0000000281 m
        np.testing.assert_allclose(xi, [expected, expected], rtol=1e-15)

    def test_endfire_collinear(self):
        # at theta = pi/2 the geometry is collinear: xi_k = |delta - psi_k * d|
        xi = near_element_distances(10.0, np.pi / 2, 2, D)
        np.testing.assert_allclose(xi, [10.0 + 0.5 * D, 10.0 - 0.5 * D], rtol=1e-12)

    def test_collapsed_geometry_rejected(self):
        with pytest.raises(ConfigurationError):
            near_element_distances(0.5 * D, np.pi / 2, 2, D)

    def test_nonpositive_distance_rejected(self):
        with pytest.raises(ConfigurationError):
            near_element_distances(0.0, 0.0, 4, D)


class TestNearSteering:
    def test_single_element(self):
        np.testing.assert_allclose(near_steering(10.0, 0.3, 1, D, F, C), [1.0 + 0j], atol=1e-15)

    def test_against_scalar_oracle(self):
        delta, theta, n = 10.0, 0.0, 2
        got = near_steering(delta, theta, n, D, F, C)
        # independent scalar evaluation of the spherical-wavefront entries
        raw = []
        for k in (1, 2):
            psi = (2 * k - n - 1) / 2
            xi = math.sqrt(delta**2 + (psi * D) ** 2 - 2 * delta * psi * D * math.sin(theta))
            phase = -2.0 * math.pi * F / C * (xi - delta)
            raw.append(delta / xi * complex(math.cos(phase), math.sin(phase)))
        norm = math.sqrt(sum(abs(v) ** 2 for v in raw))
        expected = np.array(raw) / norm
        np.testing.assert_allclose(got, expected, atol=1e-12)
        assert abs(abs(got[0]) - abs(got[1])) < 1e-12

    @pytest.mark.parametrize("theta", [0.0, 0.4, -0.9, 1.2])
    def test_far_field_limit(self, theta):
        near = near_steering(1e6, theta, 64, D, F, C)
        far = far_steering(theta, 64)
        overlap = np.vdot(far, near)
        assert abs(overlap) >= 0.999999
        aligned = near * np.conj(overlap / abs(overlap))
        assert np.max(np.abs(aligned - far)) < 1e-3

    @settings(max_examples=50, deadline=None)
    @given(
        delta=st.floats(1.0, 1e5),
        theta=st.floats(-np.pi / 2, np.pi / 2),
        n=st.integers(min_value=1, max_value=96),
        spacing=st.floats(1e-4, 5e-3),
    )
    def test_unit_norm(self, delta, theta, n, spacing):
        a = near_steering(delta, theta, n, spacing, F, C)
        assert abs(np.linalg.norm(a) - 1.0) < 1e-12


class TestRayleighDistance:
    def test_hand_values(self):
        assert rayleigh_distance(64, D, F, C) == pytest.approx(5.9535, rel=1e-6)
        assert rayleigh_distance(128, D, F, C) == pytest.approx(24.1935, rel=1e-6)
        assert rayleigh_distance(2, D, F, C) == pytest.approx(0.0015, rel=1e-12)

    def test_requires_two_elements(self):
        with pytest.raises(ConfigurationError):
            rayleigh_distance(1, D, F, C)


class TestPathSplit:
    def test_table_defaults(self):
        assert ScenarioConfig().path_split() == (2, 2)

    def test_round_half_up(self):
        cfg = ScenarioConfig(gamma=0.625, total_paths=4)  # gamma*L = 2.5
        assert cfg.path_split() == (3, 1)

    def test_endpoints(self):
        assert ScenarioConfig(gamma=1.0).path_split() == (4, 0)
        assert ScenarioConfig(gamma=0.0).path_split() == (0, 4)


class TestDrawChannel:
    def test_pure_far_field(self):
        cfg = ScenarioConfig(gamma=1.0, seed=5)
        real = draw_channel(cfg, derive(cfg.seed, 9))
        assert real.near_paths == ()
        assert len(real.far_paths) == 4
        # re-evaluate the sum independently
        acc = np.zeros(cfg.num_antennas, dtype=complex)
        for p in real.far_paths:
            acc += p.gain * far_steering(p.angle, cfg.num_antennas)
        expected = np.sqrt(cfg.num_antennas / 4) * acc
        np.testing.assert_allclose(real.channel, expected, rtol=1e-12)

    def test_pure_near_field(self):
        cfg = ScenarioConfig(gamma=0.0, seed=5)
        real = draw_channel(cfg, derive(cfg.seed, 9))
        assert real.far_paths == ()
        assert len(real.near_paths) == 4

    def test_determinism(self):
        cfg = ScenarioConfig(seed=3)
        a = draw_channel(cfg, derive(cfg.seed, 1))
        b = draw_channel(cfg, derive(cfg.seed, 1))
        np.testing.assert_array_equal(a.channel, b.channel)
        assert a.far_paths == b.far_paths
        assert a.near_paths == b.near_paths

    def test_reconstruction_from_paths(self):
        for seed in range(5):
            cfg = ScenarioConfig(num_antennas=32, num_pilots=32, seed=seed)
            real = draw_channel(cfg, derive(seed, 2))
            rebuilt = rebuild_channel(real.far_paths, real.near_paths, cfg)
            rel = np.linalg.norm(real.channel - rebuilt) / np.linalg.norm(real.channel)
            assert rel < 1e-12

    def test_near_paths_inside_rayleigh_region(self):
        cfg = ScenarioConfig(seed=4)
        low, high, overridden = near_distance_bounds(cfg)
        assert overridden  # N=64 puts the Rayleigh distance below 10 m
        omega = rayleigh_distance(64, D, F, C)
        assert low == pytest.approx(0.1 * omega)
        for i in range(50):
            real = draw_channel(cfg, derive(cfg.seed, 30 + i))
            for p in real.near_paths:
                assert low <= p.distance < omega

    def test_near_bounds_without_override(self):
        cfg = ScenarioConfig(num_antennas=128, num_pilots=128)
        low, high, overridden = near_distance_bounds(cfg)
        assert not overridden
        assert low == 10.0
        assert high == pytest.approx(rayleigh_distance(128, D, F, C), rel=1e-5)

    def test_mean_square_norm(self):
        cfg = ScenarioConfig(num_antennas=16, num_pilots=16, seed=0)
        rng = derive(0, 77)
        total = 0.0
        trials = 3000
        for _ in range(trials):
            total += np.linalg.norm(draw_channel(cfg, rng).channel) ** 2
        assert total / trials / cfg.num_antennas == pytest.approx(1.0, abs=0.05)


class TestScenarioValidation:
    def test_distance_min_must_exceed_aperture(self):
        with pytest.raises(ConfigurationError):
            ScenarioConfig(distance_min=0.01, distance_max=0.02)

    def test_gamma_range(self):
        with pytest.raises(ConfigurationError):
            ScenarioConfig(gamma=1.5)

    def test_roundtrip_dict(self):
        cfg = ScenarioConfig(num_antennas=16, num_pilots=16, seed=9)
        assert ScenarioConfig.from_dict(cfg.to_dict()) == cfg
