"""Polar-domain dictionary: steering atoms on an angle by distance grid.

Angles are uniform in sin(angle). Each angle contributes one plane-wave
atom (the infinite-distance limit) plus a set of distance rings spaced so
that the column coherence between neighboring rings stays controlled; the
ring distances follow an inverse-integer law r_s proportional to
cos(angle)^2 / s and stop at a configurable minimum distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    ArrayGeometry,
    far_field_steering_vector,
    steering_vector,
)
from .validation import check_positive, check_positive_int

FAR_FIELD = np.inf


@dataclass(frozen=True)
class PolarGridConfig:
    """Grid resolution knobs for :func:`build_polar_dictionary`.

    Parameters
    ----------
    num_angle_bins : int
        Number of angle grid points, uniform in sin(angle).
    min_distance : float
        Smallest ring distance kept, in meters.
    coherence_beta : float
        Ring density control; larger values space rings farther apart.
    """

    num_angle_bins: int
    min_distance: float
    coherence_beta: float = 1.2

    def __post_init__(self) -> None:
        check_positive_int("num_angle_bins", self.num_angle_bins)
        check_positive("min_distance", self.min_distance)
        check_positive("coherence_beta", self.coherence_beta)


@dataclass(frozen=True)
class PolarDictionary:
    """Dictionary matrix (M x Q) with per-column (angle, distance) labels.

    A distance of inf labels a plane-wave column. Columns are grouped by
    angle in ascending sin(angle); within an angle the plane-wave column
    comes first, then rings from the outermost inward.
    """

    matrix: np.ndarray
    grid: tuple[tuple[float, float], ...]

    @property
    def num_atoms(self) -> int:
        return self.matrix.shape[1]

    def finite_columns(self) -> np.ndarray:
        """Indices of columns at finite distance (the ring atoms)."""
        return np.flatnonzero([np.isfinite(d) for _, d in self.grid])

    def ring_counts(self) -> np.ndarray:
        """Number of finite-distance rings per angle bin."""
        counts: dict[float, int] = {}
        order: list[float] = []
        for angle, dist in self.grid:
            if angle not in counts:
                counts[angle] = 0
                order.append(angle)
            if np.isfinite(dist):
                counts[angle] += 1
        return np.array([counts[a] for a in order], dtype=np.int64)


def angle_grid(num_angle_bins: int) -> np.ndarray:
    """Angles (radians) whose sines are uniform over (-1, 1)."""
    check_positive_int("num_angle_bins", num_angle_bins)
    q = np.arange(num_angle_bins, dtype=np.float64)
    sines = (2.0 * q - num_angle_bins + 1.0) / num_angle_bins
    return np.arcsin(sines)


def ring_distances(
    geometry: ArrayGeometry, config: PolarGridConfig, angle: float
) -> np.ndarray:
    """Ring distances for one angle, outermost first.

    r_s = M^2 * (wavelength / 2)^2 * cos(angle)^2
          / (2 * coherence_beta^2 * s * wavelength)   for s = 1, 2, ...

    kept while r_s >= min_distance.
    """
    aperture_term = (
        float(geometry.num_antennas) ** 2
        * (geometry.wavelength / 2.0) ** 2
        * np.cos(angle) ** 2
    )
    scale = aperture_term / (2.0 * config.coherence_beta**2 * geometry.wavelength)
    if scale < config.min_distance:
        return np.empty(0, dtype=np.float64)
    max_ring = int(scale / config.min_distance)
    s = np.arange(1, max_ring + 1, dtype=np.float64)
    distances = scale / s
    return distances[distances >= config.min_distance]


def build_polar_dictionary(
    geometry: ArrayGeometry, config: PolarGridConfig
) -> PolarDictionary:
    """Assemble the polar-domain dictionary for a given array and grid."""
    columns = []
    labels = []
    for angle in angle_grid(config.num_angle_bins):
        angle = float(angle)
        columns.append(far_field_steering_vector(geometry, angle))
        labels.append((angle, FAR_FIELD))
        for distance in ring_distances(geometry, config, angle):
            columns.append(steering_vector(geometry, angle, float(distance)))
            labels.append((angle, float(distance)))
    if not columns:
        raise ValueError("polar grid produced no dictionary columns")
    return PolarDictionary(
        matrix=np.column_stack(columns), grid=tuple(labels)
    )
