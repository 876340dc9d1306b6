"""Cross-predictive learning of per-coefficient prior precisions.

The prior precision of coefficient j is parameterized as exp(r_j). Given a
random split of the measurements into halves (A_1, y_1) and (A_2, y_2),
the cross-predictive loss is the expected squared error of predicting the
held-out half from the posterior fitted on the first half:

    CP(r) = || A_2 mu_1 - y_2 ||^2 + tr(A_2 Sigma_1 A_2^H)

with (mu_1, Sigma_1) the Gaussian posterior under (A_1, y_1) and prior
precisions exp(r). The loss is minimized over r with Adam, drawing a fresh
split every iteration, and the learned precisions (rescaled for the
half-sized fit) drive one full-data posterior for the final estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measurement import (
    HalfSplit,
    LinearModel,
    complex_gaussian,
    random_half_split,
    restrict_model,
)
from .posterior import gaussian_posterior
from .validation import (
    as_float_vector,
    as_rng,
    check_positive,
    check_positive_int,
)


@dataclass(frozen=True)
class SplitData:
    """Measurement rows partitioned into a fit half and a held-out half."""

    first_matrix: np.ndarray
    first_obs: np.ndarray
    second_matrix: np.ndarray
    second_obs: np.ndarray


def split_linear_model(model: LinearModel, split: HalfSplit) -> SplitData:
    """Materialize the two row-restricted halves of a model."""
    first_matrix, first_obs = restrict_model(model, split.first_indices)
    second_matrix, second_obs = restrict_model(model, split.second_indices)
    return SplitData(
        first_matrix=first_matrix,
        first_obs=first_obs,
        second_matrix=second_matrix,
        second_obs=second_obs,
    )


def cp_objective(
    log_weights: np.ndarray, split: SplitData, noise_variance: float
) -> float:
    """Held-out predictive loss at log precisions r."""
    log_weights = as_float_vector("log_weights", log_weights)
    post = gaussian_posterior(
        split.first_matrix, split.first_obs, noise_variance, np.exp(log_weights)
    )
    residual = split.second_matrix @ post.mean - split.second_obs
    # tr(A_2 Sigma A_2^H) accumulated entrywise; avoids the B_2 x B_2 product.
    spread = split.second_matrix @ post.covariance
    trace_term = float(np.real(np.sum(spread * split.second_matrix.conj())))
    return float(np.real(np.vdot(residual, residual))) + trace_term


def cp_gradient(
    log_weights: np.ndarray, split: SplitData, noise_variance: float
) -> np.ndarray:
    """Exact gradient of :func:`cp_objective` with respect to log_weights.

    Differentiating the posterior through the precision parameterization
    gives, per coordinate j with precision p_j = exp(r_j),

        d Sigma_1 / d r_j = -p_j * Sigma_1 e_j e_j^T Sigma_1
        d mu_1    / d r_j = -p_j * mu_1[j] * Sigma_1 e_j

    Both loss terms then reduce to rows of T = Sigma_1 A_2^H:

        grad_j = -2 p_j Re( mu_1[j] * conj(T @ residual)[j] )
                 - p_j * sum_b |T[j, b]|^2
    """
    log_weights = as_float_vector("log_weights", log_weights)
    precisions = np.exp(log_weights)
    post = gaussian_posterior(
        split.first_matrix, split.first_obs, noise_variance, precisions
    )
    residual = split.second_matrix @ post.mean - split.second_obs
    cross_cov = post.covariance @ split.second_matrix.conj().T
    pulled_back = cross_cov @ residual
    residual_term = -2.0 * precisions * np.real(post.mean * np.conj(pulled_back))
    trace_term = -precisions * np.sum(np.abs(cross_cov) ** 2, axis=1)
    return residual_term + trace_term


def finite_difference_gradient(
    log_weights: np.ndarray,
    split: SplitData,
    noise_variance: float,
    step: float = 1e-5,
    objective=cp_objective,
) -> np.ndarray:
    """Central-difference gradient; the reference for gradient checks.

    `objective` may be swapped for any callable with the signature
    (log_weights, split, noise_variance) -> float.
    """
    log_weights = as_float_vector("log_weights", log_weights)
    check_positive("step", step)
    grad = np.empty_like(log_weights)
    for j in range(log_weights.shape[0]):
        bumped = log_weights.copy()
        bumped[j] = log_weights[j] + step
        upper = objective(bumped, split, noise_variance)
        bumped[j] = log_weights[j] - step
        lower = objective(bumped, split, noise_variance)
        grad[j] = (upper - lower) / (2.0 * step)
    return grad


@dataclass(frozen=True)
class CpsblOptions:
    """Optimizer settings for :func:`run_cpsbl`."""

    step_size: float = 0.5
    num_iters: int = 50
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self) -> None:
        check_positive("step_size", self.step_size)
        check_positive_int("num_iters", self.num_iters)
        if not 0.0 <= self.beta1 < 1.0:
            raise ValueError(f"beta1 must lie in [0, 1), got {self.beta1!r}")
        if not 0.0 <= self.beta2 < 1.0:
            raise ValueError(f"beta2 must lie in [0, 1), got {self.beta2!r}")
        check_positive("epsilon", self.epsilon)


@dataclass(frozen=True)
class CpsblState:
    """Log precisions plus Adam moment accumulators."""

    log_weights: np.ndarray
    first_moment: np.ndarray
    second_moment: np.ndarray
    step_count: int
    options: CpsblOptions

    @classmethod
    def initial(cls, dim: int, options: CpsblOptions) -> "CpsblState":
        return cls(
            log_weights=np.zeros(dim),
            first_moment=np.zeros(dim),
            second_moment=np.zeros(dim),
            step_count=0,
            options=options,
        )


def adam_step(state: CpsblState, gradient: np.ndarray) -> CpsblState:
    """One Adam update with bias-corrected moments.

    m <- beta1 m + (1 - beta1) g        v <- beta2 v + (1 - beta2) g^2
    r <- r - step * (m / (1 - beta1^t)) / (sqrt(v / (1 - beta2^t)) + eps)
    """
    gradient = as_float_vector("gradient", gradient)
    if gradient.shape != state.log_weights.shape:
        raise ValueError(
            f"gradient length {gradient.shape[0]} does not match state "
            f"dimension {state.log_weights.shape[0]}"
        )
    opts = state.options
    t = state.step_count + 1
    first = opts.beta1 * state.first_moment + (1.0 - opts.beta1) * gradient
    second = opts.beta2 * state.second_moment + (1.0 - opts.beta2) * gradient**2
    first_hat = first / (1.0 - opts.beta1**t)
    second_hat = second / (1.0 - opts.beta2**t)
    log_weights = state.log_weights - opts.step_size * first_hat / (
        np.sqrt(second_hat) + opts.epsilon
    )
    return CpsblState(
        log_weights=log_weights,
        first_moment=first,
        second_moment=second,
        step_count=t,
        options=opts,
    )


def run_cpsbl(
    model: LinearModel,
    rng,
    options: CpsblOptions = CpsblOptions(),
    trace: list | None = None,
) -> np.ndarray:
    """Learn log precisions over random half splits; return the estimate.

    Every iteration draws a fresh half split, evaluates the exact gradient
    of the held-out loss at the current log precisions, and applies one
    Adam update. The final estimate is the full-data posterior mean under
    precisions (total / first_half_size) * exp(r), the factor compensating
    the fit having seen only half the rows. If `trace` is a list it
    receives each optimizer state, initial state included.
    """
    rng = as_rng(rng)
    total = model.num_measurements
    if total < 2:
        raise ValueError("model must have at least 2 measurements to split")
    state = CpsblState.initial(model.num_coefficients, options)
    if trace is not None:
        trace.append(state)
    for _ in range(options.num_iters):
        split = split_linear_model(model, random_half_split(total, rng))
        gradient = cp_gradient(state.log_weights, split, model.noise_variance)
        state = adam_step(state, gradient)
        if trace is not None:
            trace.append(state)
    first_half_size = (total + 1) // 2
    rescale = total / first_half_size
    final_precision = rescale * np.exp(state.log_weights)
    post = gaussian_posterior(
        model.sensing_matrix, model.observation, model.noise_variance, final_precision
    )
    return post.mean


def max_gradient_deviation(
    rng,
    dims: tuple[int, ...] = (2, 4, 8),
    repeats: int = 7,
    step: float = 1e-5,
    noise_variance: float = 1.0,
) -> float:
    """Worst relative gap between analytic and central-difference gradients.

    Draws `repeats` random split instances per dimension with log precisions
    uniform in [-2, 2] and returns max over instances of
    ||g_exact - g_fd||_inf / ||g_fd||_inf. Used by tests and by the CLI
    gradient check.
    """
    rng = as_rng(rng)
    worst = 0.0
    for dim in dims:
        for _ in range(repeats):
            rows_first = dim + int(rng.integers(1, 5))
            rows_second = dim + int(rng.integers(1, 5))
            split = SplitData(
                first_matrix=complex_gaussian(rng, (rows_first, dim)),
                first_obs=complex_gaussian(rng, rows_first),
                second_matrix=complex_gaussian(rng, (rows_second, dim)),
                second_obs=complex_gaussian(rng, rows_second),
            )
            log_weights = rng.uniform(-2.0, 2.0, dim)
            exact = cp_gradient(log_weights, split, noise_variance)
            reference = finite_difference_gradient(
                log_weights, split, noise_variance, step
            )
            gap = np.max(np.abs(exact - reference)) / np.max(np.abs(reference))
            worst = max(worst, float(gap))
    return worst
