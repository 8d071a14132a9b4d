# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled turnstile ingest kernel.

Per update: one level hash, one bucket hash, one fused multiply-add into the
bucket table, plus an O(1) sample-slot lookup. Must stay hash-identical to
logsketch.hashing / logsketch._ingest_py.
"""

from libc.stdint cimport int64_t, uint64_t

BACKEND = "compiled"

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t TAG_LEVEL = 0xA3C59AC1B31D85C5ULL
cdef uint64_t TAG_BUCKET = 0xD6E8FEB86659FD93ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _mix64(uint64_t z) nogil:
    z ^= z >> 30
    z *= 0xBF58476D1CE4E5B9ULL
    z ^= z >> 27
    z *= 0x94D049BB133111EBULL
    z ^= z >> 31
    return z


def ingest_updates(const int64_t[::1] rows, const int64_t[::1] cols,
                   const double[::1] vals,
                   double[:, ::1] buckets, double[:, ::1] samples,
                   const int64_t[::1] sample_slots,
                   const double[::1] cum_probs, const double[::1] level_weights,
                   uint64_t seed, int64_t n_buckets):
    """Apply a batch of updates in place (see _ingest_py.ingest_updates)."""
    cdef Py_ssize_t m = rows.shape[0]
    cdef int64_t hmax = cum_probs.shape[0] - 1
    cdef uint64_t s_lvl = _mix64(seed ^ TAG_LEVEL)
    cdef uint64_t s_bkt = _mix64(seed ^ TAG_BUCKET)
    cdef bint have_samples = samples.shape[0] > 0
    cdef Py_ssize_t t
    cdef int64_t i, j, lev, g, slot
    cdef uint64_t u64, b64
    cdef double u, v
    with nogil:
        for t in range(m):
            i = rows[t]
            j = cols[t]
            v = vals[t]
            u64 = _mix64(s_lvl + (<uint64_t> (i + 1)) * GAMMA)
            u = <double> (u64 >> 11) * INV_2_53
            lev = 0
            while lev < hmax and u >= cum_probs[lev]:
                lev += 1
            b64 = _mix64((s_bkt + (<uint64_t> (i + 1)) * GAMMA)
                         ^ ((<uint64_t> (lev + 1)) * GAMMA))
            g = <int64_t> (b64 % (<uint64_t> n_buckets))
            buckets[lev * n_buckets + g, j] += level_weights[lev] * v
            if have_samples:
                slot = sample_slots[i]
                if slot >= 0:
                    samples[slot, j] += v
