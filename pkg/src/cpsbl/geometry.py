"""Uniform linear array geometry and spherical-wavefront steering vectors.

The array is a half-wavelength ULA centered on the origin. Steering vectors
carry the exact spherical phase of a point source at finite distance, so the
same response function serves both near-field dictionary atoms and channel
paths; the plane-wave response is its infinite-distance limit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_positive, check_positive_int


@dataclass(frozen=True)
class ArrayGeometry:
    """Half-wavelength uniform linear array.

    Parameters
    ----------
    num_antennas : int
        Number of elements M.
    wavelength : float
        Carrier wavelength in meters. Element spacing is wavelength / 2.
    """

    num_antennas: int
    wavelength: float

    def __post_init__(self) -> None:
        check_positive_int("num_antennas", self.num_antennas)
        check_positive("wavelength", self.wavelength)

    @property
    def element_spacing(self) -> float:
        """Spacing between adjacent elements; fixed to half the wavelength."""
        return self.wavelength / 2.0

    def element_offsets(self) -> np.ndarray:
        """Signed element offsets in units of half wavelengths.

        Element m sits at offset (2m - M + 1) / 2 for m = 0..M-1, so the
        array is symmetric about the origin.
        """
        m = np.arange(self.num_antennas, dtype=np.float64)
        return (2.0 * m - self.num_antennas + 1.0) / 2.0


def fraunhofer_distance(geometry: ArrayGeometry) -> float:
    """Far-field boundary distance (wavelength / 2) * M**2 in meters."""
    return 0.5 * geometry.wavelength * float(geometry.num_antennas) ** 2


def _check_angle(angle: float) -> float:
    angle = float(angle)
    half_pi = np.pi / 2.0
    if not (-half_pi <= angle <= half_pi) or not np.isfinite(angle):
        raise ValueError(f"angle must lie in [-pi/2, pi/2], got {angle!r}")
    return angle


def steering_vector(geometry: ArrayGeometry, angle: float, distance: float) -> np.ndarray:
    """Array response for a point source at (angle, distance).

    Entry m equals exp(-1j * (2 pi / wavelength) * (r_m - r)) where r_m is
    the exact distance from element m to the source and r is the distance
    from the array center. Entries are unit modulus, so the squared norm is
    always M.

    Parameters
    ----------
    geometry : ArrayGeometry
    angle : float
        Source angle in radians, in [-pi/2, pi/2], measured from broadside.
    distance : float
        Source distance from the array center in meters, strictly positive.

    Returns
    -------
    ndarray of complex, shape (M,)
    """
    angle = _check_angle(angle)
    distance = check_positive("distance", distance)
    positions = geometry.element_offsets() * geometry.element_spacing
    # r_m - r evaluated as (r_m^2 - r^2) / (r_m + r); the direct difference
    # of square roots loses all precision once distance >> aperture.
    excess = positions * positions - 2.0 * distance * positions * np.sin(angle)
    r_m = np.sqrt(distance * distance + excess)
    delta = excess / (r_m + distance)
    phase = -(2.0 * np.pi / geometry.wavelength) * delta
    return np.exp(1j * phase)


def far_field_steering_vector(geometry: ArrayGeometry, angle: float) -> np.ndarray:
    """Plane-wave response, the distance -> infinity limit of steering_vector."""
    angle = _check_angle(angle)
    offsets = geometry.element_offsets()
    return np.exp(1j * np.pi * offsets * np.sin(angle))
