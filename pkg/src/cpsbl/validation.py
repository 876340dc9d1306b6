"""Input validation helpers shared across the package.

All checks raise ValueError with the offending argument named, so callers
can surface actionable messages without wrapping.
"""

from __future__ import annotations

import numpy as np


def check_positive(name: str, value: float) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return value


def check_positive_int(name: str, value: int) -> int:
    if int(value) != value or value < 1:
        raise ValueError(f"{name} must be an integer >= 1, got {value!r}")
    return int(value)


def check_finite(name: str, array: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{name} contains non-finite entries")
    return array


def as_complex_matrix(name: str, value) -> np.ndarray:
    array = np.asarray(value, dtype=np.complex128)
    if array.ndim != 2:
        raise ValueError(f"{name} must be a 2-d array, got ndim={array.ndim}")
    return check_finite(name, array)


def as_complex_vector(name: str, value) -> np.ndarray:
    array = np.asarray(value, dtype=np.complex128)
    if array.ndim != 1:
        raise ValueError(f"{name} must be a 1-d array, got ndim={array.ndim}")
    return check_finite(name, array)


def as_float_vector(name: str, value) -> np.ndarray:
    array = np.asarray(value, dtype=np.float64)
    if array.ndim != 1:
        raise ValueError(f"{name} must be a 1-d array, got ndim={array.ndim}")
    return check_finite(name, array)


def as_positive_vector(name: str, value, length: int | None = None) -> np.ndarray:
    array = as_float_vector(name, value)
    if length is not None and array.shape[0] != length:
        raise ValueError(f"{name} must have length {length}, got {array.shape[0]}")
    if np.any(array <= 0.0):
        raise ValueError(f"{name} must be entrywise positive")
    return array


def as_rng(seed_or_rng) -> np.random.Generator:
    """Accept a Generator, a seed, or None and return a Generator."""
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def check_design(X, y) -> tuple[np.ndarray, np.ndarray]:
    """Validate a (design matrix, target vector) pair for the estimators."""
    A = as_complex_matrix("X", X)
    target = as_complex_vector("y", y)
    if A.shape[0] != target.shape[0]:
        raise ValueError(
            f"X and y disagree on the number of rows: {A.shape[0]} vs {target.shape[0]}"
        )
    return A, target
