"""Estimator classes with the familiar fit / predict surface.

Both estimators solve complex-valued sparse linear regression
y = X u + e with known noise variance. They accept complex design
matrices, so validation is done with this package's own helpers rather
than the standard real-valued checks.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .cross_predictive import CpsblOptions, run_cpsbl
from .esbl import InverseGammaHyper, run_esbl
from .measurement import LinearModel
from .validation import as_complex_matrix, as_rng, check_design


class EsblRegressor(BaseEstimator):
    """Sparse recovery via EM over a weight / scale prior hierarchy.

    Parameters
    ----------
    noise_var : float, default=1.0
        Known observation noise variance.
    dof : float, default=1.0
        Degrees of freedom of the per-coefficient weight prior.
    prior_shape : float, default=0.01
        Shape of the per-coefficient scale prior.
    prior_scale : float, default=0.01
        Scale of the per-coefficient scale prior.
    max_iter : int, default=50
        EM iteration cap.
    tol : float, default=1e-6
        Stop once the largest relative change of the prior variances
        falls below this.

    Attributes
    ----------
    coef_ : ndarray of shape (n_features,), complex
        Posterior mean of the coefficients.
    prior_variances_ : ndarray of shape (n_features,)
        Learned per-coefficient prior variances w * s.
    n_iter_ : int
        Number of EM iterations performed.
    """

    def __init__(
        self,
        *,
        noise_var: float = 1.0,
        dof: float = 1.0,
        prior_shape: float = 1e-2,
        prior_scale: float = 1e-2,
        max_iter: int = 50,
        tol: float = 1e-6,
    ):
        self.noise_var = noise_var
        self.dof = dof
        self.prior_shape = prior_shape
        self.prior_scale = prior_scale
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y):
        A, target = check_design(X, y)
        model = LinearModel(
            sensing_matrix=A, observation=target, noise_variance=float(self.noise_var)
        )
        hyper = InverseGammaHyper(
            dof=self.dof, shape=self.prior_shape, scale=self.prior_scale
        )
        trace: list = []
        self.coef_ = run_esbl(
            model, hyper, max_iters=self.max_iter, tol=self.tol, trace=trace
        )
        self.prior_variances_ = trace[-1].prior_variances()
        self.n_iter_ = len(trace) - 1
        return self

    def predict(self, X):
        check_is_fitted(self)
        A = as_complex_matrix("X", X)
        return A @ self.coef_


class CpsblRegressor(BaseEstimator):
    """Sparse recovery by minimizing a held-out predictive loss.

    Per-coefficient prior precisions exp(r) are learned with Adam over
    random half splits of the rows of X; the final coefficients are the
    posterior mean under the learned precisions.

    Parameters
    ----------
    noise_var : float, default=1.0
        Known observation noise variance.
    step_size : float, default=0.5
        Adam step size.
    n_iter : int, default=50
        Number of optimizer iterations, one fresh split each.
    beta1, beta2 : float
        Adam moment decay rates.
    epsilon : float, default=1e-8
        Adam denominator offset.
    random_state : int, Generator or None, default=None
        Source of the per-iteration splits.

    Attributes
    ----------
    coef_ : ndarray of shape (n_features,), complex
        Posterior mean under the learned precisions.
    log_weights_ : ndarray of shape (n_features,)
        Learned log prior precisions r.
    n_iter_ : int
        Number of optimizer iterations performed.
    """

    def __init__(
        self,
        *,
        noise_var: float = 1.0,
        step_size: float = 0.5,
        n_iter: int = 50,
        beta1: float = 0.9,
        beta2: float = 0.999,
        epsilon: float = 1e-8,
        random_state=None,
    ):
        self.noise_var = noise_var
        self.step_size = step_size
        self.n_iter = n_iter
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.random_state = random_state

    def fit(self, X, y):
        A, target = check_design(X, y)
        model = LinearModel(
            sensing_matrix=A, observation=target, noise_variance=float(self.noise_var)
        )
        options = CpsblOptions(
            step_size=self.step_size,
            num_iters=self.n_iter,
            beta1=self.beta1,
            beta2=self.beta2,
            epsilon=self.epsilon,
        )
        rng = as_rng(self.random_state)
        trace: list = []
        self.coef_ = run_cpsbl(model, rng, options, trace=trace)
        self.log_weights_ = trace[-1].log_weights
        self.n_iter_ = trace[-1].step_count
        return self

    def predict(self, X):
        check_is_fitted(self)
        A = as_complex_matrix("X", X)
        return A @ self.coef_
