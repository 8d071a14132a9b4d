"""Seeded hash assignments for sketch rows.

Every placement decision (level, bucket, sample membership) is a pure
function of (row index, seed), so the same row always lands in the same
cell no matter how its mass is split across turnstile updates. The mixer
is the splitmix64 finalizer, evaluated identically here (NumPy uint64
arithmetic, wrapping) and in the compiled kernel.
"""

from __future__ import annotations

import numpy as np

U64 = np.uint64
_GAMMA = U64(0x9E3779B97F4A7C15)
_MIX1 = U64(0xBF58476D1CE4E5B9)
_MIX2 = U64(0x94D049BB133111EB)
_TAG_LEVEL = U64(0xA3C59AC1B31D85C5)
_TAG_BUCKET = U64(0xD6E8FEB86659FD93)
_TAG_SAMPLE = U64(0x8CB92BA72F3D8DD7)

_INV_2_53 = 2.0 ** -53


def mix64(z):
    """splitmix64 finalizer on uint64 scalars or arrays (wrapping)."""
    z = U64(z) if np.isscalar(z) or isinstance(z, int) else z.astype(U64)
    with np.errstate(over="ignore"):  # uint64 wraparound is the point
        z = (z ^ (z >> U64(30))) * _MIX1
        z = (z ^ (z >> U64(27))) * _MIX2
    return z ^ (z >> U64(31))


def level_seed(seed):
    return mix64(U64(seed) ^ _TAG_LEVEL)


def bucket_seed(seed):
    return mix64(U64(seed) ^ _TAG_BUCKET)


def level_uniform(rows, seed):
    """Uniform [0,1) double per row index, from the level hash stream."""
    rows = np.asarray(rows, dtype=np.int64).astype(U64)
    with np.errstate(over="ignore"):
        u64 = mix64(level_seed(seed) + (rows + U64(1)) * _GAMMA)
    return (u64 >> U64(11)).astype(np.float64) * _INV_2_53


def assign_levels(rows, cum_probs, seed):
    """Level index per row: inverse-CDF lookup on the level hash.

    cum_probs is the cumulative level distribution with last entry 1.0.
    """
    u = level_uniform(rows, seed)
    return np.searchsorted(cum_probs, u, side="right").astype(np.int64)


def assign_buckets(rows, levels, n_buckets, seed):
    """Bucket index in [0, n_buckets) per (row, level)."""
    rows = np.asarray(rows, dtype=np.int64).astype(U64)
    levels = np.asarray(levels, dtype=np.int64).astype(U64)
    with np.errstate(over="ignore"):
        h = mix64((bucket_seed(seed) + (rows + U64(1)) * _GAMMA)
                  ^ ((levels + U64(1)) * _GAMMA))
    return (h % U64(n_buckets)).astype(np.int64)


def sample_row_indices(n, k, seed):
    """k distinct row indices drawn uniformly without replacement.

    Pure function of (n, k, seed); returned sorted ascending.
    """
    if not 0 <= k <= n:
        raise ValueError(f"sample size k={k} must lie in [0, n={n}]")
    if k == 0:
        return np.empty(0, dtype=np.int64)
    rng = np.random.default_rng(int(mix64(U64(seed) ^ _TAG_SAMPLE)))
    idx = rng.choice(n, size=k, replace=False)
    return np.sort(idx.astype(np.int64))
