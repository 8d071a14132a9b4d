"""Pure NumPy turnstile ingest kernel (fallback when the C extension is absent).

Semantically identical to logsketch._ingest: same hash assignments, same
accumulation, vectorized over a batch of updates.
"""

from __future__ import annotations

import numpy as np

from .hashing import assign_buckets, assign_levels

BACKEND = "python"


def ingest_updates(rows, cols, vals, buckets, samples, sample_slots,
                   cum_probs, level_weights, seed, n_buckets):
    """Apply a batch of updates (rows[t], cols[t]) += vals[t] to the state.

    buckets and samples are modified in place. Bucket cells receive the
    level weight times the raw value; sample cells receive raw values.
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    if rows.shape[0] == 0:
        return
    lev = assign_levels(rows, cum_probs, seed)
    g = assign_buckets(rows, lev, n_buckets, seed)
    d = buckets.shape[1]
    flat = (lev * n_buckets + g) * d + cols
    acc = np.bincount(flat, weights=level_weights[lev] * vals, minlength=buckets.size)
    buckets += acc.reshape(buckets.shape)
    if samples.shape[0] > 0:
        slots = sample_slots[rows]
        hit = slots >= 0
        if hit.any():
            sflat = slots[hit] * d + cols[hit]
            sacc = np.bincount(sflat, weights=vals[hit], minlength=samples.size)
            samples += sacc.reshape(samples.shape)
