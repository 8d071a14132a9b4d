"""Minimizers for the weighted smooth loss and the clipped nonsmooth loss.

minimize_weighted: limited-memory quasi-Newton descent (two-loop recursion)
with Armijo backtracking, monotone in the loss by construction. Deterministic
given inputs. minimize_clipped: subgradient descent with step length
initial_step/sqrt(t) along the normalized subgradient, tracking the best
iterate seen (the standard recipe for nonsmooth convex objectives).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .objectives import (ClipSpec, clipped_weighted_loss,
                         clipped_weighted_subgrad, logistic_grad,
                         weighted_loss_at)


class SolverError(RuntimeError):
    pass


@dataclass
class SolveOptions:
    max_iters: int = 500
    grad_tol: float = 1e-8
    step_schedule: str = "inverse-sqrt"  # for the subgradient method
    initial_step: float = 1.0
    history_size: int = 10

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be > 0")
        if not self.initial_step > 0:
            raise ValueError("initial_step must be > 0")
        if self.step_schedule not in ("inverse-sqrt", "fixed"):
            raise ValueError(f"unknown step_schedule {self.step_schedule!r}")


@dataclass
class SolveResult:
    x: np.ndarray
    loss: float
    iters: int
    converged: bool


def _check_finite(loss, x, it):
    if not np.isfinite(loss):
        raise SolverError(
            f"non-finite loss {loss} at iteration {it} (|x| = {np.linalg.norm(x):.3g})"
        )


def minimize_weighted(rows, weights, x0=None, opts: SolveOptions | None = None) -> SolveResult:
    """Minimize sum_i w_i g(a_i @ x) by L-BFGS-style descent.

    Stops when the gradient infinity-norm drops below grad_tol (converged)
    or after max_iters accepted steps. The loss never increases across
    accepted steps (Armijo sufficient decrease with backtracking).
    """
    rows = np.asarray(rows, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    opts = opts or SolveOptions()
    d = rows.shape[1]
    x = np.zeros(d) if x0 is None else np.asarray(x0, dtype=np.float64).copy()

    f = weighted_loss_at(rows, weights, x)
    grad = logistic_grad(rows, weights, x)
    _check_finite(f, x, 0)
    s_hist, y_hist, rho_hist = [], [], []
    it = 0
    while it < opts.max_iters:
        gnorm = np.max(np.abs(grad)) if grad.size else 0.0
        if gnorm < opts.grad_tol:
            return SolveResult(x=x, loss=f, iters=it, converged=True)
        # two-loop recursion for the quasi-Newton direction
        q = grad.copy()
        alphas = []
        for s, y, rho in zip(reversed(s_hist), reversed(y_hist), reversed(rho_hist)):
            a = rho * np.dot(s, q)
            alphas.append(a)
            q -= a * y
        if y_hist:
            gamma = np.dot(s_hist[-1], y_hist[-1]) / np.dot(y_hist[-1], y_hist[-1])
            q *= gamma
        for (s, y, rho), a in zip(zip(s_hist, y_hist, rho_hist), reversed(alphas)):
            b = rho * np.dot(y, q)
            q += (a - b) * s
        direction = -q
        dg = np.dot(direction, grad)
        if dg >= 0.0:  # not a descent direction; fall back to steepest descent
            direction = -grad
            dg = -np.dot(grad, grad)
        # Armijo backtracking
        step, accepted = 1.0, False
        for _ in range(60):
            x_new = x + step * direction
            f_new = weighted_loss_at(rows, weights, x_new)
            if np.isfinite(f_new) and f_new <= f + 1e-4 * step * dg:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            # no progress possible at double precision
            return SolveResult(x=x, loss=f, iters=it, converged=True)
        grad_new = logistic_grad(rows, weights, x_new)
        _check_finite(f_new, x_new, it + 1)
        s_vec, y_vec = x_new - x, grad_new - grad
        sy = np.dot(s_vec, y_vec)
        if sy > 1e-12 * np.linalg.norm(s_vec) * np.linalg.norm(y_vec):
            s_hist.append(s_vec)
            y_hist.append(y_vec)
            rho_hist.append(1.0 / sy)
            if len(s_hist) > opts.history_size:
                s_hist.pop(0)
                y_hist.pop(0)
                rho_hist.pop(0)
        x, f, grad = x_new, f_new, grad_new
        it += 1
    return SolveResult(x=x, loss=f, iters=it, converged=False)


def minimize_full(A, x0=None, opts: SolveOptions | None = None) -> SolveResult:
    """Minimize the unweighted full loss f(Ax)."""
    A = np.asarray(A, dtype=np.float64)
    return minimize_weighted(A, np.ones(A.shape[0]), x0=x0, opts=opts)


def minimize_clipped(sk, clip: ClipSpec, x0=None,
                     opts: SolveOptions | None = None) -> SolveResult:
    """Minimize the clipped weighted loss by subgradient descent.

    Step t moves by initial_step/sqrt(t) (or a fixed initial_step) along the
    normalized subgradient; the best iterate seen is returned. Deterministic
    given inputs.
    """
    opts = opts or SolveOptions(max_iters=2000)
    d = sk.B.shape[1]
    x = np.zeros(d) if x0 is None else np.asarray(x0, dtype=np.float64).copy()
    best_x = x.copy()
    best_f = clipped_weighted_loss(sk, x, clip)
    _check_finite(best_f, x, 0)
    converged = False
    t = 0
    for t in range(1, opts.max_iters + 1):
        g = clipped_weighted_subgrad(sk, x, clip)
        gnorm = float(np.linalg.norm(g))
        if gnorm < opts.grad_tol:
            converged = True
            break
        if opts.step_schedule == "inverse-sqrt":
            eta = opts.initial_step / np.sqrt(t)
        else:
            eta = opts.initial_step
        x = x - (eta / gnorm) * g
        f = clipped_weighted_loss(sk, x, clip)
        _check_finite(f, x, t)
        if f < best_f:
            best_f, best_x = f, x.copy()
    return SolveResult(x=best_x, loss=best_f, iters=t, converged=converged)
