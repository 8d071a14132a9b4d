"""Logistic objectives on weighted row sets, plus clipped variants.

Conventions: for a signed matrix A (rows a_i = -label_i x_i) the full loss is
f(Ax) = sum_i g(a_i @ x) with g(v) = log(1 + e^v). Weighted variants scale
each term. The positive-part mass G+(z) = sum of positive entries of z is the
piecewise-linear skeleton of the loss: max(v, 0) <= g(v) <= ln2 + max(v, 0).

Clipping: on a sketched dataset, keep only the K largest entries per level
block (plus the whole sample block). Dropping all but the top-K per level
discards bucket noise while keeping every heavy bucket; the result is still
convex because a sum of the K largest of convex functions is convex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .sketch import SketchedDataset

LN2 = math.log(2.0)


def stable_logistic(v):
    """g(v) = log(1 + exp(v)), overflow-free; g(1000) == 1000 exactly."""
    return np.logaddexp(0.0, v)


def logistic_loss(z) -> float:
    """Unweighted loss sum_i g(z_i)."""
    return float(np.sum(stable_logistic(np.asarray(z, dtype=np.float64))))


def weighted_logistic_loss(z, w) -> float:
    """sum_i w_i g(z_i)."""
    z = np.asarray(z, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    return float(np.dot(w, stable_logistic(z)))


def weighted_loss_at(rows, weights, x) -> float:
    """sum_i w_i g(a_i @ x) for a weighted row set."""
    return weighted_logistic_loss(np.asarray(rows) @ np.asarray(x), weights)


def logistic_grad(rows, weights, x) -> np.ndarray:
    """Gradient of weighted_loss_at in x: sum_i w_i sigmoid(a_i @ x) a_i."""
    rows = np.asarray(rows, dtype=np.float64)
    z = rows @ np.asarray(x, dtype=np.float64)
    s = np.asarray(weights, dtype=np.float64) * expit(z)
    return rows.T @ s


def gplus(z) -> float:
    """Positive-part mass: sum of entries of z that are >= 0."""
    z = np.asarray(z, dtype=np.float64)
    return float(np.sum(z[z > 0.0]))


def split_bounds(z):
    """Two-sided bound on the loss via its negative part and positive mass.

    Returns (lower, upper) with
    lower = (f(min(z,0)) + G+(z)) / 2 and upper = f(min(z,0)) + G+(z);
    f(z) always lies in [lower, upper].
    """
    z = np.asarray(z, dtype=np.float64)
    f_neg = logistic_loss(np.minimum(z, 0.0))
    gp = gplus(z)
    return 0.5 * (f_neg + gp), f_neg + gp


def min_loss_lower_bound(n: int, mu: float) -> float:
    """(n / (2 mu)) * (1 + ln mu): floor on the optimal loss of any
    dataset with complexity ratio mu (n rows)."""
    if mu < 1.0:
        raise ValueError("mu must be >= 1")
    return n / (2.0 * mu) * (1.0 + math.log(mu))


# --- clipped objective ------------------------------------------------------


@dataclass(frozen=True)
class ClipSpec:
    """Top-K clipping layout for a sketched dataset.

    level_starts: first row of each level block (consecutive, equal size);
    sample_offset: first row of the sample block (= end of last level block);
    K: entries kept per level, 1 <= K <= block size.
    """

    level_starts: tuple
    sample_offset: int
    K: int

    def __post_init__(self):
        if len(self.level_starts) == 0:
            raise ValueError("at least one level block required")
        if self.K > self.block_size or self.K < 1:
            raise ValueError(f"K={self.K} outside [1, block size {self.block_size}]")

    @property
    def block_size(self) -> int:
        bounds = list(self.level_starts) + [self.sample_offset]
        sizes = {bounds[i + 1] - bounds[i] for i in range(len(self.level_starts))}
        if len(sizes) != 1:
            raise ValueError("level blocks must have equal size")
        return sizes.pop()

    @classmethod
    def from_sketch(cls, sk: SketchedDataset, K: int | None = None) -> "ClipSpec":
        return cls(level_starts=sk.level_starts, sample_offset=sk.sample_offset,
                   K=sk.config.clip if K is None else K)


def _top_k_indices(vals: np.ndarray, K: int) -> np.ndarray:
    """Indices of the K largest entries; ties broken toward lower index."""
    order = np.argsort(-vals, kind="stable")
    return order[:K]


def gplus_clipped(sz, clip: ClipSpec, level_weights) -> float:
    """Clipped positive-part mass of a sketched vector.

    Per level block of sz: select the K buckets with the largest values, sum
    their positive parts, scale by that level's weight; add up over levels.
    Pass level_weights of all ones when the sketch already carries its level
    weights inside the bucket values.
    """
    sz = np.asarray(sz, dtype=np.float64)
    level_weights = np.asarray(level_weights, dtype=np.float64)
    bounds = list(clip.level_starts) + [clip.sample_offset]
    total = 0.0
    for h in range(len(clip.level_starts)):
        block = sz[bounds[h]: bounds[h + 1]]
        kept = block[_top_k_indices(block, clip.K)]
        total += level_weights[h] * float(np.sum(np.maximum(kept, 0.0)))
    return total


def _clipped_selection(sk: SketchedDataset, x, clip: ClipSpec):
    """Row indices entering the clipped loss at x: top-K per level + sample."""
    Bx = sk.B @ np.asarray(x, dtype=np.float64)
    bounds = list(clip.level_starts) + [clip.sample_offset]
    picked = []
    for h in range(len(clip.level_starts)):
        lo, hi = bounds[h], bounds[h + 1]
        picked.append(lo + _top_k_indices(Bx[lo:hi], clip.K))
    picked.append(np.arange(clip.sample_offset, sk.B.shape[0]))
    sel = np.concatenate(picked)
    return sel, Bx


def clipped_weighted_loss(sk: SketchedDataset, x, clip: ClipSpec) -> float:
    """Weighted loss over the sample block plus the top-K rows per level.

    Selection uses the entries of B @ x (post-scaling values). Convex in x.
    """
    sel, Bx = _clipped_selection(sk, x, clip)
    return float(np.dot(sk.weights[sel], stable_logistic(Bx[sel])))


def clipped_weighted_subgrad(sk: SketchedDataset, x, clip: ClipSpec) -> np.ndarray:
    """A subgradient of clipped_weighted_loss at x.

    Differentiates through the currently selected rows (ties toward lower
    index), which is the gradient of the active piece of the max-of-sums
    representation, hence a valid subgradient everywhere.
    """
    sel, Bx = _clipped_selection(sk, x, clip)
    s = sk.weights[sel] * expit(Bx[sel])
    return sk.B[sel].T @ s


# --- complexity ratio -------------------------------------------------------


@dataclass
class MuEstimate:
    """Lower-bound witness for the complexity ratio mu.

    mu(A) = sup_x |pos part of Ax|_1 / |neg part of Ax|_1, symmetrized over
    x and -x so the estimate is always >= 1. value may be inf when a probed
    direction has positive mass but zero negative mass.
    """

    value: float
    witness: np.ndarray
    unbounded: bool


def _ratio(Az) -> float:
    pos = float(np.sum(Az[Az > 0]))
    neg = float(-np.sum(Az[Az < 0]))
    if neg == 0.0:
        return math.inf if pos > 0.0 else 1.0
    if pos == 0.0:
        return 0.0
    return pos / neg


def _sym_ratio(Az) -> float:
    r = _ratio(Az)
    if r == 0.0:
        return math.inf  # the flipped direction has zero negative mass
    return max(r, 1.0 / r)


def mu_lower_bound(A, n_probes: int = 200, seed: int = 0,
                   refine_rounds: int = 3) -> MuEstimate:
    """Probe random and coordinate directions for a lower bound on mu.

    Evaluates the positive/negative mass ratio at Gaussian probes, coordinate
    axes, and multiplicative local perturbations of the best direction found.
    Returns the best (largest) symmetrized ratio; a true lower bound on mu.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError("A must be 2-d")
    if not np.any(A != 0.0):
        raise ValueError("mu is undefined for an all-zero matrix")
    n, d = A.shape
    rng = np.random.default_rng(seed)
    probes = [np.eye(d)[j] for j in range(d)]
    probes += list(rng.standard_normal((n_probes, d)))
    best_val, best_x = 1.0, np.eye(d)[0]
    for x in probes:
        r = _sym_ratio(A @ x)
        if r > best_val:
            best_val, best_x = r, x
    for _ in range(refine_rounds):
        improved = False
        for j in range(d):
            for mult in (0.5, 2.0, -1.0, 0.0):
                y = best_x.copy()
                y[j] = best_x[j] * mult if mult != 0.0 else 0.0
                if not np.any(y != 0.0):
                    continue
                r = _sym_ratio(A @ y)
                if r > best_val:
                    best_val, best_x, improved = r, y, True
        if not improved:
            break
    return MuEstimate(value=float(best_val), witness=best_x,
                      unbounded=math.isinf(best_val))
