"""Gaussian posterior for a complex linear model with diagonal prior.

For y = A u + e, e ~ CN(0, sigma^2 I), and independent priors
u_j ~ CN(0, 1 / p_j) given entrywise prior precisions p_j, the posterior
is CN(mu, Sigma) with

    Sigma = ((1 / sigma^2) A^H A + Diag(p))^{-1}
    mu    = (1 / sigma^2) Sigma A^H y

Solves go through a Cholesky factorization of the posterior precision; the
covariance is materialized because downstream consumers need its diagonal
and trace products.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .validation import (
    as_complex_matrix,
    as_complex_vector,
    as_positive_vector,
    check_positive,
)


@dataclass(frozen=True)
class GaussianPosterior:
    """Posterior mean (D,) and Hermitian covariance (D, D)."""

    mean: np.ndarray
    covariance: np.ndarray


def _posterior_from_normal_equations(
    gram: np.ndarray,
    projection: np.ndarray,
    noise_variance: float,
    prior_precision: np.ndarray,
) -> GaussianPosterior:
    """Posterior given precomputed A^H A and A^H y; skips input re-checks."""
    dim = gram.shape[0]
    precision_matrix = gram / noise_variance
    precision_matrix.flat[:: dim + 1] += prior_precision
    factor = scipy.linalg.cho_factor(precision_matrix, lower=True, check_finite=False)
    mean = scipy.linalg.cho_solve(factor, projection / noise_variance, check_finite=False)
    covariance = scipy.linalg.cho_solve(
        factor, np.eye(dim, dtype=np.complex128), check_finite=False
    )
    covariance = 0.5 * (covariance + covariance.conj().T)
    return GaussianPosterior(mean=mean, covariance=covariance)


def gaussian_posterior(
    sensing_matrix: np.ndarray,
    observation: np.ndarray,
    noise_variance: float,
    prior_precision: np.ndarray,
) -> GaussianPosterior:
    """Exact posterior over coefficients under a diagonal Gaussian prior.

    Parameters
    ----------
    sensing_matrix : complex ndarray, shape (P, D)
    observation : complex ndarray, shape (P,)
    noise_variance : float
        Known observation noise variance sigma^2 > 0.
    prior_precision : float ndarray, shape (D,)
        Entrywise prior precisions, all strictly positive.

    Returns
    -------
    GaussianPosterior
        Mean vector and Hermitian covariance with positive real diagonal.
    """
    A = as_complex_matrix("sensing_matrix", sensing_matrix)
    y = as_complex_vector("observation", observation)
    if y.shape[0] != A.shape[0]:
        raise ValueError(
            f"observation length {y.shape[0]} does not match matrix rows {A.shape[0]}"
        )
    noise_variance = check_positive("noise_variance", noise_variance)
    precision = as_positive_vector("prior_precision", prior_precision, length=A.shape[1])
    gram = A.conj().T @ A
    projection = A.conj().T @ y
    return _posterior_from_normal_equations(gram, projection, noise_variance, precision)
