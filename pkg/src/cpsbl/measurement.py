"""Pilot observations and the vectorized linear measurement model.

The downlink block observation is Y = sqrt(power) * H * P + E. Expressing
the channel matrix in dictionary coordinates, H ~= F U, and stacking Y
column-major turns the block into a single linear model
vec(Y) ~= A u + e with A = sqrt(power) * (P^T kron F) and u = vec(U).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dictionary import PolarDictionary
from .validation import (
    as_complex_matrix,
    as_rng,
    check_positive,
    check_positive_int,
)


class ModelDims(NamedTuple):
    """Provenance of a vectorized model: antennas, pilots, users, atoms."""

    num_antennas: int
    pilot_length: int
    num_users: int
    num_atoms: int


@dataclass(frozen=True)
class PilotMatrix:
    """K x N pilot block with mutually orthogonal rows."""

    matrix: np.ndarray

    @property
    def num_users(self) -> int:
        return self.matrix.shape[0]

    @property
    def pilot_length(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class LinearModel:
    """Vectorized observation model y = A u + e with known noise variance.

    Arrays are held by reference; callers must not mutate them after
    construction.
    """

    sensing_matrix: np.ndarray
    observation: np.ndarray
    noise_variance: float
    dims: ModelDims | None = None

    def __post_init__(self) -> None:
        if self.sensing_matrix.ndim != 2:
            raise ValueError("sensing_matrix must be 2-d")
        if self.observation.ndim != 1:
            raise ValueError("observation must be 1-d")
        rows, cols = self.sensing_matrix.shape
        if self.observation.shape[0] != rows:
            raise ValueError(
                f"observation length {self.observation.shape[0]} does not match "
                f"sensing_matrix rows {rows}"
            )
        check_positive("noise_variance", self.noise_variance)
        if self.dims is not None:
            m, n, k, q = self.dims
            if rows != m * n:
                raise ValueError(f"dims promise {m * n} rows, matrix has {rows}")
            if cols != k * q:
                raise ValueError(f"dims promise {k * q} columns, matrix has {cols}")

    @property
    def num_measurements(self) -> int:
        return self.sensing_matrix.shape[0]

    @property
    def num_coefficients(self) -> int:
        return self.sensing_matrix.shape[1]


@dataclass(frozen=True)
class HalfSplit:
    """Disjoint partition of measurement rows into two near-halves.

    Both index arrays are sorted ascending; the first half carries the
    ceiling of total / 2 indices.
    """

    first_indices: np.ndarray
    second_indices: np.ndarray


def dft_pilot_matrix(pilot_length: int, num_users: int) -> PilotMatrix:
    """First K rows of the N-point DFT matrix; satisfies P P^H = N I_K."""
    check_positive_int("pilot_length", pilot_length)
    check_positive_int("num_users", num_users)
    if num_users > pilot_length:
        raise ValueError(
            f"num_users ({num_users}) must not exceed pilot_length ({pilot_length})"
        )
    k = np.arange(num_users)[:, None]
    n = np.arange(pilot_length)[None, :]
    matrix = np.exp(-2j * np.pi * k * n / pilot_length)
    return PilotMatrix(matrix=matrix)


def complex_gaussian(rng, shape, variance: float = 1.0) -> np.ndarray:
    """Circularly symmetric complex Gaussian draws with the given variance."""
    rng = as_rng(rng)
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def simulate_observation(
    channels: np.ndarray,
    pilots: PilotMatrix,
    transmit_power: float,
    noise_variance: float,
    rng,
) -> np.ndarray:
    """Observe Y = sqrt(power) * H * P + E with i.i.d. CN(0, sigma^2) noise."""
    channels = as_complex_matrix("channels", channels)
    check_positive("transmit_power", transmit_power)
    check_positive("noise_variance", noise_variance)
    if channels.shape[1] != pilots.num_users:
        raise ValueError(
            f"channels have {channels.shape[1]} users but pilots have "
            f"{pilots.num_users}"
        )
    noise = complex_gaussian(rng, (channels.shape[0], pilots.pilot_length), noise_variance)
    return np.sqrt(transmit_power) * channels @ pilots.matrix + noise


def assemble_linear_model(
    observation_block: np.ndarray,
    pilots: PilotMatrix,
    dictionary: PolarDictionary,
    transmit_power: float,
    noise_variance: float,
) -> LinearModel:
    """Vectorize an observed block into y = A u + e coordinates.

    A = sqrt(power) * (P^T kron F) so that vec(sqrt(power) * F U P) = A vec(U)
    under column-major vec. The transmit power is folded into A; the noise
    variance is carried alongside unchanged.
    """
    block = as_complex_matrix("observation_block", observation_block)
    check_positive("transmit_power", transmit_power)
    num_antennas, pilot_length = block.shape
    if pilot_length != pilots.pilot_length:
        raise ValueError(
            f"observation block has {pilot_length} columns but pilots have "
            f"{pilots.pilot_length}"
        )
    if num_antennas != dictionary.matrix.shape[0]:
        raise ValueError(
            f"observation block has {num_antennas} rows but the dictionary "
            f"has {dictionary.matrix.shape[0]}"
        )
    sensing = np.sqrt(transmit_power) * np.kron(pilots.matrix.T, dictionary.matrix)
    dims = ModelDims(
        num_antennas=num_antennas,
        pilot_length=pilot_length,
        num_users=pilots.num_users,
        num_atoms=dictionary.num_atoms,
    )
    return LinearModel(
        sensing_matrix=sensing,
        observation=block.flatten(order="F"),
        noise_variance=float(noise_variance),
        dims=dims,
    )


def random_half_split(total: int, rng) -> HalfSplit:
    """Uniformly random disjoint split of range(total) into two near-halves."""
    check_positive_int("total", total)
    if total < 2:
        raise ValueError(f"total must be at least 2 to split, got {total}")
    rng = as_rng(rng)
    first_size = (total + 1) // 2
    permutation = rng.permutation(total)
    return HalfSplit(
        first_indices=np.sort(permutation[:first_size]),
        second_indices=np.sort(permutation[first_size:]),
    )


def restrict_model(model: LinearModel, indices) -> tuple[np.ndarray, np.ndarray]:
    """Select measurement rows; returns copies (A_sub, y_sub) in given order."""
    indices = np.asarray(indices, dtype=np.int64)
    if indices.ndim != 1:
        raise ValueError("indices must be 1-d")
    total = model.num_measurements
    if indices.size and (indices.min() < 0 or indices.max() >= total):
        raise ValueError(f"indices must lie in [0, {total})")
    if np.unique(indices).size != indices.size:
        raise ValueError("indices must not repeat")
    return model.sensing_matrix[indices, :], model.observation[indices]
