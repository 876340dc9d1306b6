"""Sparse Bayesian recovery with a product inverse-gamma prior hierarchy.

Each coefficient u_j carries a prior u_j ~ CN(0, w_j * s_j) whose variance
factors into a per-coefficient weight w_j ~ InvGamma(dof / 2, dof / 2) and
scale s_j ~ InvGamma(shape, scale). The EM loop alternates the exact
Gaussian posterior over u (E-step) with closed-form MAP updates of w and s
(M-step); sparsity emerges as variances of irrelevant coefficients shrink.

The Gaussian posterior consumes precisions, so the prior enters as
1 / (w_j * s_j).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measurement import LinearModel
from .posterior import GaussianPosterior, _posterior_from_normal_equations
from .validation import as_positive_vector, check_positive, check_positive_int


@dataclass(frozen=True)
class InverseGammaHyper:
    """Hyperparameters: weight prior InvGamma(dof/2, dof/2), scale prior
    InvGamma(shape, scale)."""

    dof: float = 1.0
    shape: float = 1e-2
    scale: float = 1e-2

    def __post_init__(self) -> None:
        check_positive("dof", self.dof)
        check_positive("shape", self.shape)
        check_positive("scale", self.scale)


@dataclass(frozen=True)
class EsblState:
    """Per-coefficient weights and scales plus the hyperparameters."""

    weights: np.ndarray
    scales: np.ndarray
    hyper: InverseGammaHyper

    def __post_init__(self) -> None:
        as_positive_vector("weights", self.weights)
        as_positive_vector("scales", self.scales, length=self.weights.shape[0])

    def prior_variances(self) -> np.ndarray:
        return self.weights * self.scales

    def prior_precision(self) -> np.ndarray:
        return 1.0 / (self.weights * self.scales)

    @classmethod
    def initial(cls, dim: int, hyper: InverseGammaHyper) -> "EsblState":
        return cls(weights=np.ones(dim), scales=np.ones(dim), hyper=hyper)


def esbl_em_step(state: EsblState, posterior: GaussianPosterior) -> EsblState:
    """One M-step: MAP updates of weights then scales.

    Uses the posterior second moments E|u_j|^2 = |mu_j|^2 + Sigma_jj. The
    scale update sees the already-updated weights, which keeps both updates
    exact coordinate maximizers of the penalized objective.
    """
    second_moment = np.abs(posterior.mean) ** 2 + np.real(np.diag(posterior.covariance))
    if not np.all(np.isfinite(second_moment)):
        raise ValueError("posterior second moments are non-finite")
    half_dof = state.hyper.dof / 2.0
    weights = (half_dof + second_moment / state.scales) / (half_dof + 2.0)
    scales = (state.hyper.scale + second_moment / weights) / (state.hyper.shape + 2.0)
    return EsblState(weights=weights, scales=scales, hyper=state.hyper)


def run_esbl(
    model: LinearModel,
    hyper: InverseGammaHyper = InverseGammaHyper(),
    max_iters: int = 50,
    tol: float = 1e-6,
    trace: list | None = None,
) -> np.ndarray:
    """EM loop; returns the posterior mean of the coefficients.

    Iterates posterior computation and weight/scale updates until max_iters
    or until the largest relative change of the prior variances w * s drops
    below tol. The returned mean is taken from the last posterior computed
    inside the loop, so with max_iters = 1 it equals the ridge solution
    under the all-ones initialization. If `trace` is a list it receives the
    state at entry to every iteration plus the final state.
    """
    check_positive_int("max_iters", max_iters)
    check_positive("tol", tol)
    A = model.sensing_matrix
    # A is fixed across iterations; form the normal equations once.
    gram = A.conj().T @ A
    projection = A.conj().T @ model.observation
    state = EsblState.initial(model.num_coefficients, hyper)
    posterior = None
    for _ in range(max_iters):
        if trace is not None:
            trace.append(state)
        posterior = _posterior_from_normal_equations(
            gram, projection, model.noise_variance, state.prior_precision()
        )
        new_state = esbl_em_step(state, posterior)
        change = np.max(
            np.abs(new_state.prior_variances() / state.prior_variances() - 1.0)
        )
        state = new_state
        if change < tol:
            break
    if trace is not None:
        trace.append(state)
    return posterior.mean
