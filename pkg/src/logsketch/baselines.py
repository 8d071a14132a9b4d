"""Reduction baselines: uniform sampling, root-leverage sampling, one-pass SGD.

Both coresets are i.i.d.-with-replacement importance samples with the usual
inverse-probability weights, so the weighted loss is an unbiased estimator of
the full loss at every fixed x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .data_model import WeightedDataset


@dataclass
class CoresetSample:
    """A weighted subsample plus provenance."""

    data: WeightedDataset
    indices: np.ndarray
    method: str
    seed: int


def uniform_coreset(A, size: int, seed: int = 0) -> CoresetSample:
    """size rows drawn i.i.d. uniformly with replacement, weights n/size."""
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    if size < 1:
        raise ValueError("size must be >= 1")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n, size=size)
    w = np.full(size, n / size)
    return CoresetSample(data=WeightedDataset(rows=A[idx], weights=w),
                         indices=idx, method="uniform", seed=seed)


def leverage_scores_l2(A) -> np.ndarray:
    """Row leverage scores tau_i of A (squared row norms of an orthonormal
    basis of the column space). Robust to rank deficiency; sums to rank(A)."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] == 0:
        raise ValueError("A must be a nonempty 2-d matrix")
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    tol = max(A.shape) * np.finfo(np.float64).eps * (s[0] if s.size else 0.0)
    r = int(np.sum(s > tol))
    if r == 0:
        raise ValueError("leverage scores undefined for an all-zero matrix")
    return np.sum(U[:, :r] ** 2, axis=1)


def l2s_coreset(A, size: int, seed: int = 0, scores=None) -> CoresetSample:
    """Importance sample with probabilities proportional to sqrt(tau_i).

    Rows are drawn i.i.d. with replacement; row i gets weight 1/(size * p_i).
    Precomputed scores may be passed to amortize the decomposition.
    """
    A = np.asarray(A, dtype=np.float64)
    if size < 1:
        raise ValueError("size must be >= 1")
    tau = leverage_scores_l2(A) if scores is None else np.asarray(scores, dtype=np.float64)
    p = np.sqrt(tau)
    p /= p.sum()
    rng = np.random.default_rng(seed)
    idx = rng.choice(A.shape[0], size=size, replace=True, p=p)
    w = 1.0 / (size * p[idx])
    return CoresetSample(data=WeightedDataset(rows=A[idx], weights=w),
                         indices=idx, method="l2s", seed=seed)


def sgd_one_pass(rows, step_constant: float = 1.0, schedule: str = "inverse-sqrt",
                 seed: int | None = None, shuffle: bool = False) -> np.ndarray:
    """Single pass of stochastic gradient descent over the signed rows.

    Visits each row exactly once in stream order (set shuffle=True to permute
    with the given seed first). Step t is eta_t = step_constant/sqrt(t)
    (or fixed), moving by -eta_t * sigmoid(a_t @ x) * a_t. Returns the final
    iterate; the pass itself is the entire data reduction.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if schedule not in ("inverse-sqrt", "fixed"):
        raise ValueError(f"unknown schedule {schedule!r}")
    order = np.arange(rows.shape[0])
    if shuffle:
        order = np.random.default_rng(seed).permutation(rows.shape[0])
    x = np.zeros(rows.shape[1])
    for t, i in enumerate(order, start=1):
        a = rows[i]
        eta = step_constant / np.sqrt(t) if schedule == "inverse-sqrt" else step_constant
        x -= eta * expit(float(a @ x)) * a
    return x
