"""Polar dictionary construction: grids, ring rules, column norms."""

import numpy as np
import pytest

from cpsbl import (
    ArrayGeometry,
    PolarGridConfig,
    angle_grid,
    build_polar_dictionary,
    far_field_steering_vector,
    fraunhofer_distance,
    ring_distances,
    steering_vector,
)
from oracles import brute_force_ring_count

GEOM = ArrayGeometry(num_antennas=64, wavelength=0.04)
D_F = fraunhofer_distance(GEOM)


class TestAngleGrid:
    def test_uniform_in_sine(self):
        angles = angle_grid(64)
        sines = np.sin(angles)
        assert angles.shape == (64,)
        assert np.allclose(np.diff(sines), 2.0 / 64)
        assert np.allclose(sines, -sines[::-1])

    def test_single_bin_is_broadside(self):
        assert np.allclose(angle_grid(1), [0.0])


class TestRingDistances:
    def test_matches_formula_and_cutoff(self):
        config = PolarGridConfig(num_angle_bins=64, min_distance=D_F / 10)
        for angle in (0.0, 0.3, -0.5):
            rings = ring_distances(GEOM, config, angle)
            for s, r in enumerate(rings, start=1):
                expected = (
                    64**2 * (0.04 / 2) ** 2 * np.cos(angle) ** 2
                ) / (2 * 1.2**2 * s * 0.04)
                assert r == pytest.approx(expected, rel=1e-12)
                assert r >= config.min_distance
            # the next ring would fall below the cutoff
            s_next = len(rings) + 1
            r_next = (
                64**2 * (0.04 / 2) ** 2 * np.cos(angle) ** 2
            ) / (2 * 1.2**2 * s_next * 0.04)
            assert r_next < config.min_distance

    def test_descending(self):
        config = PolarGridConfig(num_angle_bins=8, min_distance=1.0, coherence_beta=0.5)
        rings = ring_distances(GEOM, config, 0.1)
        assert len(rings) > 3
        assert np.all(np.diff(rings) < 0)


class TestBuildPolarDictionary:
    def test_column_count_matches_brute_force(self):
        # Frozen regression value for the reference configuration, checked
        # against an independent loop enumeration of the ring rule.
        config = PolarGridConfig(num_angle_bins=64, min_distance=D_F / 10)
        dictionary = build_polar_dictionary(GEOM, config)
        brute = brute_force_ring_count(64, 0.04, 64, 1.2, D_F / 10)
        assert dictionary.num_atoms == brute
        assert dictionary.num_atoms == 106

    def test_column_norms_equal_m(self):
        config = PolarGridConfig(num_angle_bins=16, min_distance=D_F / 10)
        dictionary = build_polar_dictionary(GEOM, config)
        norms = np.sum(np.abs(dictionary.matrix) ** 2, axis=0)
        assert np.allclose(norms, GEOM.num_antennas, rtol=1e-12)

    def test_grid_labels_match_columns(self):
        config = PolarGridConfig(num_angle_bins=8, min_distance=D_F / 10, coherence_beta=0.6)
        dictionary = build_polar_dictionary(GEOM, config)
        assert len(dictionary.grid) == dictionary.num_atoms
        for idx, (angle, distance) in enumerate(dictionary.grid):
            if np.isinf(distance):
                expected = far_field_steering_vector(GEOM, angle)
            else:
                expected = steering_vector(GEOM, angle, distance)
            assert np.array_equal(dictionary.matrix[:, idx], expected)

    def test_min_distance_beyond_fraunhofer_leaves_plane_waves_only(self):
        config = PolarGridConfig(num_angle_bins=32, min_distance=2.0 * D_F)
        dictionary = build_polar_dictionary(GEOM, config)
        assert dictionary.num_atoms == 32
        assert all(np.isinf(d) for _, d in dictionary.grid)
        assert dictionary.finite_columns().size == 0

    def test_ring_counts_accessor(self):
        config = PolarGridConfig(num_angle_bins=64, min_distance=D_F / 10)
        dictionary = build_polar_dictionary(GEOM, config)
        counts = dictionary.ring_counts()
        assert counts.shape == (64,)
        assert counts.sum() + 64 == dictionary.num_atoms

    def test_deterministic(self):
        config = PolarGridConfig(num_angle_bins=16, min_distance=D_F / 10)
        first = build_polar_dictionary(GEOM, config)
        second = build_polar_dictionary(GEOM, config)
        assert np.array_equal(first.matrix, second.matrix)
        assert first.grid == second.grid

    def test_rejects_bad_config(self):
        with pytest.raises(ValueError):
            PolarGridConfig(num_angle_bins=0, min_distance=1.0)
        with pytest.raises(ValueError):
            PolarGridConfig(num_angle_bins=8, min_distance=0.0)
        with pytest.raises(ValueError):
            PolarGridConfig(num_angle_bins=8, min_distance=1.0, coherence_beta=0.0)
