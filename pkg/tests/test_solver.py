"""Tests for the smooth and clipped solvers.

Optima on the tiny instances were derived by hand (closed forms) and
confirmed with a fine grid search before the assertions were written:
min g(x) + 2 g(-x) sits at x* = ln 2 with value 3 ln 3 - 2 ln 2.
"""

import math

import numpy as np
import pytest

from logsketch.objectives import (
    ClipSpec,
    clipped_weighted_loss,
    weighted_loss_at,
)
from logsketch.sketch import config_for_size, finalize, sketch_matrix
from logsketch.solver import (
    SolveOptions,
    SolveResult,
    minimize_clipped,
    minimize_full,
    minimize_weighted,
)


class TestOptionsValidation:
    def test_defaults_are_valid(self):
        opts = SolveOptions()
        assert opts.max_iters == 500
        assert opts.step_schedule == "inverse-sqrt"

    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            SolveOptions(max_iters=0)
        with pytest.raises(ValueError):
            SolveOptions(grad_tol=-1.0)
        with pytest.raises(ValueError):
            SolveOptions(step_schedule="warp")
        with pytest.raises(ValueError):
            SolveOptions(initial_step=0.0)


class TestWeightedSolver:
    def test_closed_form_one_dimensional(self):
        # min g(x) + 2 g(-x): stationarity gives e^x = 2.
        rows = np.array([[1.0], [-1.0]])
        w = np.array([1.0, 2.0])
        res = minimize_weighted(rows, w)
        assert res.converged
        assert res.x[0] == pytest.approx(math.log(2.0), abs=1e-6)
        assert res.loss == pytest.approx(1.9095425048844386, abs=1e-10)

    def test_symmetric_instance_stays_at_zero(self):
        rows = np.array([[1.0], [-1.0]])
        res = minimize_weighted(rows, np.ones(2))
        assert abs(res.x[0]) < 1e-8
        assert res.loss == pytest.approx(2 * math.log(2.0), abs=1e-12)

    def test_matches_grid_search_on_weighted_instance(self):
        # Independent oracle: dense 1-d grid around the optimum.
        rows = np.array([[1.0], [-1.0], [2.0]])
        w = np.array([1.0, 3.0, 0.5])
        res = minimize_weighted(rows, w)
        xs = np.linspace(-2.0, 2.0, 400_001)
        losses = (
            w[0] * np.logaddexp(0, xs)
            + w[1] * np.logaddexp(0, -xs)
            + w[2] * np.logaddexp(0, 2 * xs)
        )
        i = losses.argmin()
        assert res.x[0] == pytest.approx(xs[i], abs=1e-4)
        assert res.loss == pytest.approx(losses[i], abs=1e-8)
        assert res.loss <= losses[i] + 1e-10  # never worse than the grid

    def test_loss_non_increasing_in_iteration_budget(self):
        rng = np.random.default_rng(0)
        rows = rng.standard_normal((50, 3))
        w = rng.uniform(0.5, 2.0, size=50)
        losses = []
        for iters in (1, 2, 5, 10, 50):
            res = minimize_weighted(rows, w, opts=SolveOptions(max_iters=iters))
            losses.append(res.loss)
        for a, b in zip(losses, losses[1:]):
            assert b <= a + 1e-12

    def test_deterministic(self):
        rng = np.random.default_rng(1)
        rows = rng.standard_normal((30, 4))
        w = np.ones(30)
        r1 = minimize_weighted(rows, w)
        r2 = minimize_weighted(rows, w)
        np.testing.assert_array_equal(r1.x, r2.x)
        assert r1.loss == r2.loss

    def test_respects_starting_point(self):
        rows = np.array([[1.0], [-1.0]])
        res = minimize_weighted(rows, np.array([1.0, 2.0]), x0=np.array([5.0]))
        assert res.x[0] == pytest.approx(math.log(2.0), abs=1e-6)

    def test_result_type(self):
        res = minimize_weighted(np.array([[1.0], [-1.0]]), np.ones(2))
        assert isinstance(res, SolveResult)
        # x0 = 0 is already stationary here, so zero iterations is correct.
        assert res.iters == 0
        assert res.converged


class TestFullSolver:
    def test_equals_unit_weight_solve(self):
        rng = np.random.default_rng(2)
        A = rng.standard_normal((40, 3))
        a = minimize_full(A)
        b = minimize_weighted(A, np.ones(40))
        np.testing.assert_array_equal(a.x, b.x)

    def test_balanced_sign_instance(self):
        # n/2 rows (+1), n/2 rows (-1): optimum is x = 0, loss n ln 2.
        n = 30
        A = np.vstack([np.ones((15, 1)), -np.ones((15, 1))])
        res = minimize_full(A)
        assert res.loss == pytest.approx(n * math.log(2.0), abs=1e-9)


class TestClippedSolver:
    def _sketched(self, seed=0, n=300, d=3, size=80):
        rng = np.random.default_rng(seed)
        A = rng.standard_normal((n, d))
        # Shift one coordinate so the instance has signal: a pure-noise
        # matrix has its optimum at x = 0 and nothing to descend.
        A[:, 0] -= 1.5
        cfg = config_for_size(size, n, d, seed=seed)
        return finalize(sketch_matrix(A, cfg))

    def test_k_equal_buckets_matches_smooth(self):
        sk = self._sketched(seed=3)
        spec = ClipSpec.from_sketch(sk, K=sk.config.n_buckets)
        smooth = minimize_weighted(
            sk.B, sk.weights, opts=SolveOptions(max_iters=500)
        )
        clipped = minimize_clipped(
            sk, spec, opts=SolveOptions(max_iters=2000, initial_step=1.0)
        )
        assert clipped.loss == pytest.approx(smooth.loss, rel=1e-3)

    def test_returns_best_iterate(self):
        sk = self._sketched(seed=4)
        spec = ClipSpec.from_sketch(sk)
        res = minimize_clipped(sk, spec, opts=SolveOptions(max_iters=200))
        # Reported loss is the clipped loss at the reported point...
        assert clipped_weighted_loss(sk, res.x, spec) == pytest.approx(
            res.loss, rel=1e-12
        )
        # ...and no worse than the starting point's loss.
        start = clipped_weighted_loss(sk, np.zeros(3), spec)
        assert res.loss <= start + 1e-12

    def test_deterministic(self):
        sk = self._sketched(seed=5)
        spec = ClipSpec.from_sketch(sk)
        r1 = minimize_clipped(sk, spec, opts=SolveOptions(max_iters=100))
        r2 = minimize_clipped(sk, spec, opts=SolveOptions(max_iters=100))
        np.testing.assert_array_equal(r1.x, r2.x)

    def test_fixed_schedule_also_converges(self):
        sk = self._sketched(seed=6)
        spec = ClipSpec.from_sketch(sk)
        res = minimize_clipped(
            sk,
            spec,
            opts=SolveOptions(
                max_iters=500, step_schedule="fixed", initial_step=0.05
            ),
        )
        start = clipped_weighted_loss(sk, np.zeros(3), spec)
        assert res.loss < start


class TestSmoothAgainstSketchLoss:
    def test_solver_reaches_stationary_point_of_weighted_loss(self):
        sk_seed = 7
        sk = TestClippedSolver()._sketched(seed=sk_seed)
        res = minimize_weighted(sk.B, sk.weights)
        # Perturbations in random directions must not decrease the loss.
        rng = np.random.default_rng(8)
        f0 = weighted_loss_at(sk.B, sk.weights, res.x)
        for _ in range(20):
            delta = rng.standard_normal(3) * 1e-4
            assert weighted_loss_at(sk.B, sk.weights, res.x + delta) >= f0 - 1e-9
