#!/usr/bin/env python3
"""Throughput benchmark for the turnstile ingest kernels.

Feeds the same random update batch to every available kernel backend
(pure NumPy, and the compiled extension when built), times the ingest
call alone, and checks the resulting sketch states are bitwise
identical. The figure of merit is updates/second; the shipping target
for the fast path is 1e6 updates/s at covertype width (d=54).

Usage:
    python3 benchmarks/bench_ingest.py
    python3 benchmarks/bench_ingest.py --updates 5000000 --d 54 --repeat 5
"""

import argparse
import time

import numpy as np

from logsketch.backend import kernel_backends
from logsketch.sketch import config_for_size, init_sketch


def make_batch(n, d, n_updates, seed):
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, n, size=n_updates, dtype=np.int64)
    cols = rng.integers(0, d, size=n_updates, dtype=np.int64)
    vals = rng.standard_normal(n_updates)
    return rows, cols, vals


def time_backend(mod, cfg, rows, cols, vals, repeat):
    """Best-of-`repeat` wall time for one full ingest on a fresh state."""
    best = float("inf")
    state = None
    for _ in range(repeat):
        state = init_sketch(cfg)
        t0 = time.perf_counter()
        mod.ingest_updates(
            rows, cols, vals,
            state.buckets, state.samples, state.sample_slots,
            state.cum, state.weights,
            np.uint64(cfg.seed), cfg.n_buckets,
        )
        best = min(best, time.perf_counter() - t0)
    return best, state


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--updates", type=int, default=2_000_000,
                    help="number of turnstile updates per run (default 2e6)")
    ap.add_argument("--n", type=int, default=100_000,
                    help="declared row count of the streamed matrix")
    ap.add_argument("--d", type=int, default=54,
                    help="declared column count (default 54, covertype width)")
    ap.add_argument("--size", type=int, default=500,
                    help="total summary size used to shape the sketch")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3,
                    help="repetitions per backend; best time is reported")
    args = ap.parse_args(argv)

    cfg = config_for_size(args.size, args.n, args.d, seed=args.seed)
    rows, cols, vals = make_batch(args.n, args.d, args.updates, args.seed + 1)
    backends = kernel_backends()

    print(f"ingest benchmark: {args.updates:,} updates, n={args.n:,}, "
          f"d={args.d}, summary size {args.size}, best of {args.repeat}")
    results = {}
    states = {}
    for name, mod in backends.items():
        elapsed, state = time_backend(mod, cfg, rows, cols, vals, args.repeat)
        rate = args.updates / elapsed
        results[name] = rate
        states[name] = state
        tick = "ok" if rate >= 1e6 else "BELOW 1e6/s"
        print(f"  {name:>8}: {elapsed:8.3f} s   {rate:12,.0f} updates/s   [{tick}]")

    if len(results) > 1:
        print(f"  speedup compiled/python: "
              f"{results['compiled'] / results['python']:.1f}x")
        a, b = states["python"], states["compiled"]
        same = (np.array_equal(a.buckets, b.buckets)
                and np.array_equal(a.samples, b.samples))
        print(f"  backends bitwise identical: {same}")
        if not same:
            raise SystemExit("backend outputs diverged")
    else:
        print("  (compiled extension not built; only the NumPy kernel ran)")


if __name__ == "__main__":
    main()
