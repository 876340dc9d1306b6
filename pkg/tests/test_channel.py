"""Multipath channel generation: scaling, statistics, determinism."""

import numpy as np
import pytest

from cpsbl import (
    ArrayGeometry,
    PathParams,
    channel_from_paths,
    fraunhofer_distance,
    generate_channel_matrix,
    generate_multipath_channel,
    sample_paths,
    steering_vector,
)

GEOM = ArrayGeometry(num_antennas=32, wavelength=0.16)


class TestPathParams:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            PathParams(gain=1.0, angle=2.0, distance=5.0)
        with pytest.raises(ValueError):
            PathParams(gain=1.0, angle=0.2, distance=0.0)


class TestSamplePaths:
    def test_ranges(self):
        rng = np.random.default_rng(5)
        d_f = fraunhofer_distance(GEOM)
        paths = sample_paths(GEOM, 200, rng)
        angles = np.array([p.angle for p in paths])
        distances = np.array([p.distance for p in paths])
        assert np.all((angles >= -np.pi / 4) & (angles <= np.pi / 4))
        assert np.all((distances >= d_f / 8) & (distances <= d_f / 2))

    def test_leading_paths_shared_across_path_counts(self):
        # Same seed, different requested counts: the first paths agree.
        few = sample_paths(GEOM, 2, np.random.default_rng(9))
        many = sample_paths(GEOM, 6, np.random.default_rng(9))
        assert few == many[:2]

    def test_rejects_zero_paths(self):
        with pytest.raises(ValueError):
            sample_paths(GEOM, 0, np.random.default_rng(0))


class TestChannelFromPaths:
    def test_single_unit_gain_path_energy_is_m(self):
        h = channel_from_paths(GEOM, [PathParams(gain=1.0, angle=0.1, distance=20.0)])
        assert np.linalg.norm(h) ** 2 == pytest.approx(GEOM.num_antennas, rel=1e-12)

    def test_carrier_phase_applied_per_path(self):
        path = PathParams(gain=1.0, angle=-0.3, distance=12.5)
        h = channel_from_paths(GEOM, [path])
        expected = np.exp(-2j * np.pi * path.distance / GEOM.wavelength) * steering_vector(
            GEOM, path.angle, path.distance
        )
        assert np.allclose(h, expected, atol=1e-12)

    def test_ensemble_energy_approaches_m(self):
        # Average ||h||^2 over many gain draws with fixed path geometry.
        rng = np.random.default_rng(31)
        fixed = sample_paths(GEOM, 3, rng)
        num_draws = 10_000
        total = 0.0
        atoms = np.column_stack(
            [
                np.exp(-2j * np.pi * p.distance / GEOM.wavelength)
                * steering_vector(GEOM, p.angle, p.distance)
                for p in fixed
            ]
        )
        gains = (
            rng.standard_normal((num_draws, 3)) + 1j * rng.standard_normal((num_draws, 3))
        ) / np.sqrt(2.0)
        channels = gains @ atoms.T / np.sqrt(3.0)
        total = np.mean(np.sum(np.abs(channels) ** 2, axis=1))
        assert total == pytest.approx(GEOM.num_antennas, rel=0.05)

    def test_rejects_empty_paths(self):
        with pytest.raises(ValueError):
            channel_from_paths(GEOM, [])


class TestGenerateMultipathChannel:
    def test_bitwise_deterministic(self):
        h1, paths1 = generate_multipath_channel(GEOM, 3, np.random.default_rng(123))
        h2, paths2 = generate_multipath_channel(GEOM, 3, np.random.default_rng(123))
        assert np.array_equal(h1, h2)
        assert paths1 == paths2

    def test_shape(self):
        h, paths = generate_multipath_channel(GEOM, 4, np.random.default_rng(1))
        assert h.shape == (GEOM.num_antennas,)
        assert len(paths) == 4


class TestGenerateChannelMatrix:
    def test_shapes_and_determinism(self):
        real = generate_channel_matrix(GEOM, 3, 2, np.random.default_rng(7))
        again = generate_channel_matrix(GEOM, 3, 2, np.random.default_rng(7))
        assert real.channels.shape == (GEOM.num_antennas, 3)
        assert real.num_users == 3
        assert len(real.paths) == 3
        assert np.array_equal(real.channels, again.channels)
