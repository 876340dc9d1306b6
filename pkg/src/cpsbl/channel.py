"""Multipath near-field channel generation.

A channel is a sum of L point-source paths with complex Gaussian gains.
With the norm-sqrt(M) steering vectors from :mod:`cpsbl.geometry`, the
1/sqrt(L) combining factor makes the expected channel energy equal M, i.e.
one unit of average power per antenna.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import ArrayGeometry, fraunhofer_distance, steering_vector
from .validation import as_rng, check_positive, check_positive_int


@dataclass(frozen=True)
class PathParams:
    """Single propagation path: complex gain, angle (rad), distance (m)."""

    gain: complex
    angle: float
    distance: float

    def __post_init__(self) -> None:
        half_pi = np.pi / 2.0
        if not (-half_pi <= self.angle <= half_pi):
            raise ValueError(f"angle must lie in [-pi/2, pi/2], got {self.angle!r}")
        check_positive("distance", self.distance)


@dataclass(frozen=True)
class ChannelRealization:
    """A drawn multi-user channel: columns of `channels` are per-user vectors."""

    channels: np.ndarray
    paths: tuple[tuple[PathParams, ...], ...]

    @property
    def num_users(self) -> int:
        return self.channels.shape[1]


def sample_paths(
    geometry: ArrayGeometry,
    num_paths: int,
    rng,
    angle_range: tuple[float, float] = (-np.pi / 4.0, np.pi / 4.0),
    distance_range: tuple[float, float] | None = None,
) -> tuple[PathParams, ...]:
    """Draw path parameters: gains CN(0, 1), angles and distances uniform.

    The default distance range is [d_F / 8, d_F / 2] where d_F is the
    Fraunhofer distance of the array. Paths are drawn one at a time so that
    two streams with the same seed agree on their leading paths even when
    asked for different path counts.
    """
    check_positive_int("num_paths", num_paths)
    rng = as_rng(rng)
    if distance_range is None:
        d_f = fraunhofer_distance(geometry)
        distance_range = (d_f / 8.0, d_f / 2.0)
    paths = []
    for _ in range(num_paths):
        re, im = rng.standard_normal(2)
        gain = complex(re, im) / np.sqrt(2.0)
        angle = float(rng.uniform(angle_range[0], angle_range[1]))
        distance = float(rng.uniform(distance_range[0], distance_range[1]))
        paths.append(PathParams(gain=gain, angle=angle, distance=distance))
    return tuple(paths)


def channel_from_paths(geometry: ArrayGeometry, paths) -> np.ndarray:
    """Combine paths into a channel vector.

    h = (1 / sqrt(L)) * sum_l gain_l * exp(-1j * 2 pi * r_l / wavelength)
        * steering_vector(angle_l, r_l)

    The carrier phase exp(-1j * 2 pi * r_l / wavelength) belongs to the
    path, not to the steering vector, which is referenced to the array
    center.
    """
    paths = tuple(paths)
    if len(paths) == 0:
        raise ValueError("paths must contain at least one path")
    wavenumber = 2.0 * np.pi / geometry.wavelength
    h = np.zeros(geometry.num_antennas, dtype=np.complex128)
    for p in paths:
        carrier = np.exp(-1j * wavenumber * p.distance)
        h += p.gain * carrier * steering_vector(geometry, p.angle, p.distance)
    return h / np.sqrt(len(paths))


def generate_multipath_channel(
    geometry: ArrayGeometry,
    num_paths: int,
    rng,
    angle_range: tuple[float, float] = (-np.pi / 4.0, np.pi / 4.0),
    distance_range: tuple[float, float] | None = None,
) -> tuple[np.ndarray, tuple[PathParams, ...]]:
    """Draw one channel realization; returns (channel vector, path tuple)."""
    paths = sample_paths(geometry, num_paths, rng, angle_range, distance_range)
    return channel_from_paths(geometry, paths), paths


def generate_channel_matrix(
    geometry: ArrayGeometry, num_users: int, num_paths: int, rng
) -> ChannelRealization:
    """Draw independent channels for several users from one stream."""
    check_positive_int("num_users", num_users)
    rng = as_rng(rng)
    columns = []
    all_paths = []
    for _ in range(num_users):
        h, paths = generate_multipath_channel(geometry, num_paths, rng)
        columns.append(h)
        all_paths.append(paths)
    return ChannelRealization(
        channels=np.column_stack(columns), paths=tuple(all_paths)
    )
