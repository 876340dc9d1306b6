"""EM estimator: update formulas, monotonicity, recovery."""

import numpy as np
import pytest

from cpsbl import (
    EsblState,
    GaussianPosterior,
    InverseGammaHyper,
    LinearModel,
    complex_gaussian,
    esbl_em_step,
    gaussian_posterior,
    run_esbl,
)
from oracles import penalized_marginal_objective


def make_posterior(mean, cov_diag):
    mean = np.asarray(mean, dtype=complex)
    return GaussianPosterior(mean=mean, covariance=np.diag(np.asarray(cov_diag, dtype=complex)))


class TestEsblEmStep:
    def test_weight_update_hand_value(self):
        # dof=1, s=1, second moment 1: w = (0.5 + 1) / 2.5 = 0.6
        state = EsblState(
            weights=np.ones(1), scales=np.ones(1), hyper=InverseGammaHyper(dof=1.0)
        )
        post = make_posterior([np.sqrt(0.5)], [0.5])
        new = esbl_em_step(state, post)
        assert new.weights[0] == pytest.approx(0.6, abs=1e-12)

    def test_scale_update_sees_new_weights(self):
        # With zero second moment: w -> (dof/2) / (dof/2 + 2) regardless of s,
        # and s -> scale / (shape + 2).
        hyper = InverseGammaHyper(dof=1.0, shape=1e-2, scale=1e-2)
        state = EsblState(weights=np.full(2, 3.0), scales=np.full(2, 7.0), hyper=hyper)
        new = esbl_em_step(state, make_posterior([0.0, 0.0], [0.0, 0.0]))
        assert np.allclose(new.weights, 0.5 / 2.5, atol=1e-12)
        assert np.allclose(new.scales, 1e-2 / 2.01, atol=1e-12)

    def test_both_updates_against_formula(self):
        rng = np.random.default_rng(6)
        hyper = InverseGammaHyper(dof=1.7, shape=0.2, scale=0.05)
        state = EsblState(
            weights=rng.uniform(0.5, 2.0, 5), scales=rng.uniform(0.5, 2.0, 5), hyper=hyper
        )
        mean = complex_gaussian(rng, 5)
        cov_diag = rng.uniform(0.01, 1.0, 5)
        new = esbl_em_step(state, make_posterior(mean, cov_diag))
        m2 = np.abs(mean) ** 2 + cov_diag
        expected_w = (hyper.dof / 2 + m2 / state.scales) / (hyper.dof / 2 + 2)
        expected_s = (hyper.scale + m2 / expected_w) / (hyper.shape + 2)
        assert np.allclose(new.weights, expected_w, rtol=1e-12)
        assert np.allclose(new.scales, expected_s, rtol=1e-12)

    def test_updates_stay_positive(self):
        rng = np.random.default_rng(12)
        state = EsblState(
            weights=rng.uniform(1e-6, 10.0, 8),
            scales=rng.uniform(1e-6, 10.0, 8),
            hyper=InverseGammaHyper(),
        )
        post = make_posterior(complex_gaussian(rng, 8), rng.uniform(0.0, 2.0, 8))
        new = esbl_em_step(state, post)
        assert np.all(new.weights > 0)
        assert np.all(new.scales > 0)


def random_sparse_model(rng, dim=None, rows=None, noise_var=0.5):
    dim = dim or int(rng.integers(4, 17))
    rows = rows or dim + int(rng.integers(2, 10))
    A = complex_gaussian(rng, (rows, dim))
    coeffs = np.zeros(dim, dtype=complex)
    active = rng.choice(dim, size=max(1, dim // 4), replace=False)
    coeffs[active] = 2.0 * complex_gaussian(rng, active.size)
    y = A @ coeffs + complex_gaussian(rng, rows, noise_var)
    return LinearModel(sensing_matrix=A, observation=y, noise_variance=noise_var), coeffs


class TestRunEsbl:
    def test_single_iteration_is_unit_ridge(self):
        # All-ones initialization means the first posterior uses unit
        # prior precision.
        rng = np.random.default_rng(2)
        model, _ = random_sparse_model(rng)
        estimate = run_esbl(model, max_iters=1)
        ridge = gaussian_posterior(
            model.sensing_matrix,
            model.observation,
            model.noise_variance,
            np.ones(model.num_coefficients),
        )
        assert np.allclose(estimate, ridge.mean, atol=1e-12)

    def test_trace_records_states(self):
        rng = np.random.default_rng(3)
        model, _ = random_sparse_model(rng)
        trace = []
        run_esbl(model, max_iters=5, tol=1e-15, trace=trace)
        assert len(trace) == 6
        assert np.all(trace[0].weights == 1.0)
        assert np.all(trace[0].scales == 1.0)

    def test_penalized_objective_monotone(self):
        rng = np.random.default_rng(4)
        for _ in range(3):
            model, _ = random_sparse_model(rng)
            trace = []
            run_esbl(model, max_iters=30, tol=1e-15, trace=trace)
            objectives = [
                penalized_marginal_objective(
                    model.sensing_matrix, model.observation, model.noise_variance, state
                )
                for state in trace
            ]
            steps = np.diff(objectives)
            assert np.all(steps >= -1e-8)

    def test_early_stop_on_tolerance(self):
        rng = np.random.default_rng(5)
        model, _ = random_sparse_model(rng)
        trace = []
        run_esbl(model, max_iters=500, tol=1e-4, trace=trace)
        assert len(trace) < 500

    def test_noiseless_single_active_recovery(self):
        # Orthogonal-scaled columns, one active coefficient, near-zero
        # noise: the fit must land on the planted coefficient.
        rng = np.random.default_rng(7)
        dim, rows = 8, 16
        A = np.linalg.qr(complex_gaussian(rng, (rows, dim)))[0][:, :dim] * 3.0
        coeffs = np.zeros(dim, dtype=complex)
        coeffs[3] = 1.5 - 0.5j
        y = A @ coeffs
        model = LinearModel(sensing_matrix=A, observation=y, noise_variance=1e-6)
        estimate = run_esbl(model, max_iters=50)
        rel_err = np.linalg.norm(estimate - coeffs) / np.linalg.norm(coeffs)
        assert rel_err < 1e-2

    def test_deterministic(self):
        rng = np.random.default_rng(8)
        model, _ = random_sparse_model(rng)
        first = run_esbl(model)
        second = run_esbl(model)
        assert np.array_equal(first, second)

    def test_rejects_bad_iteration_budget(self):
        rng = np.random.default_rng(9)
        model, _ = random_sparse_model(rng)
        with pytest.raises(ValueError):
            run_esbl(model, max_iters=0)
        with pytest.raises(ValueError):
            run_esbl(model, tol=0.0)


class TestInverseGammaHyper:
    def test_defaults(self):
        hyper = InverseGammaHyper()
        assert hyper.dof == 1.0
        assert hyper.shape == 1e-2
        assert hyper.scale == 1e-2

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            InverseGammaHyper(dof=0.0)
        with pytest.raises(ValueError):
            InverseGammaHyper(shape=-1.0)
        with pytest.raises(ValueError):
            InverseGammaHyper(scale=0.0)
