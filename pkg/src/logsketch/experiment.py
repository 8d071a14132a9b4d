"""Benchmark harness: reduce -> solve -> score, over a grid of methods/sizes.

Every cell (method, size, rep) is scored by the approximation ratio
f(A x_cell) / f(A x_star), both evaluated on the full signed matrix, where
x_star comes from one reference solve per dataset. Per-cell seeds are derived
from (seed_base, method, size, rep), so identical plans reproduce identical
results byte for byte (timing columns aside).
"""

from __future__ import annotations

import hashlib
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .baselines import l2s_coreset, leverage_scores_l2, sgd_one_pass, uniform_coreset
from .data_model import signed_design_matrix
from .datasets import (DatasetSpec, ResultRecord, write_results_csv,
                       write_summary_csv)
from .objectives import ClipSpec
from .sketch import config_for_size, finalize, sketch_matrix
from .solver import SolveOptions, minimize_clipped, minimize_full, minimize_weighted

METHODS = ("sketch", "sketch-clipped", "uniform", "l2s", "sgd")


@dataclass
class ExperimentPlan:
    dataset: DatasetSpec
    methods: tuple = METHODS
    sizes: tuple = ()           # empty -> 30 equal steps chosen from n
    reps: int = 20
    seed_base: int = 0
    n_levels: int = 3
    sample_fraction: float = 1.0

    def resolved_sizes(self, n: int) -> tuple:
        if self.sizes:
            return tuple(int(s) for s in self.sizes)
        hi = min(3000, max(200, n // 10))
        return tuple(sorted(set(np.linspace(100, hi, 30).astype(int).tolist())))


def cell_seed(seed_base: int, method: str, size: int, rep: int) -> int:
    """Stable 64-bit seed for one experiment cell."""
    digest = hashlib.blake2b(f"{method}|{size}|{rep}".encode(), digest_size=8).digest()
    return (seed_base ^ int.from_bytes(digest, "little")) & (2 ** 64 - 1)


def approximation_ratio(A, x, f_star: float) -> float:
    """f(A x) / f_star on the full data; requires f_star > 0."""
    from .objectives import logistic_loss

    if not f_star > 0.0:
        raise ValueError(
            "reference optimum is zero: the data is perfectly separable and "
            "approximation ratios are undefined"
        )
    return logistic_loss(np.asarray(A) @ np.asarray(x)) / f_star


def _run_cell(method, A, size, seed, plan, l2s_scores):
    """One (method, size, rep) cell: returns (x, reduce_ms, total_ms)."""
    t0 = time.perf_counter()
    if method == "sketch" or method == "sketch-clipped":
        cfg = config_for_size(size, A.shape[0], A.shape[1],
                              n_levels=plan.n_levels,
                              sample_fraction=plan.sample_fraction, seed=seed)
        sk = finalize(sketch_matrix(A, cfg))
        t1 = time.perf_counter()
        if method == "sketch":
            res = minimize_weighted(sk.B, sk.weights)
        else:
            res = minimize_clipped(sk, ClipSpec.from_sketch(sk),
                                   opts=SolveOptions(max_iters=2000))
    elif method == "uniform":
        cs = uniform_coreset(A, size, seed=seed)
        t1 = time.perf_counter()
        res = minimize_weighted(cs.data.rows, cs.data.weights)
    elif method == "l2s":
        cs = l2s_coreset(A, size, seed=seed, scores=l2s_scores)
        t1 = time.perf_counter()
        res = minimize_weighted(cs.data.rows, cs.data.weights)
    elif method == "sgd":
        order = np.random.default_rng(seed).permutation(A.shape[0])
        x = sgd_one_pass(A[order])
        t1 = time.perf_counter()

        class _R:
            pass

        res = _R()
        res.x = x
    else:
        raise ValueError(f"unknown method {method!r}")
    t2 = time.perf_counter()
    return res.x, (t1 - t0) * 1e3, (t2 - t0) * 1e3


def run_experiment(plan: ExperimentPlan, out_csv=None, log=sys.stderr):
    """Execute a plan; returns the list of result records.

    When out_csv is given, also writes the results CSV and a companion
    summary CSV (medians per method/size) next to it.
    """
    bad = set(plan.methods) - set(METHODS)
    if bad:
        raise ValueError(f"unknown methods in plan: {sorted(bad)}")
    data = plan.dataset.load()
    A = signed_design_matrix(data, add_intercept=plan.dataset.add_intercept)
    n = A.shape[0]
    sizes = plan.resolved_sizes(n)

    ref = minimize_full(A, opts=SolveOptions(max_iters=1000))
    f_star = ref.loss
    if not f_star > 0.0:
        raise ValueError("full-data optimum is zero (perfect separation)")

    l2s_scores = leverage_scores_l2(A) if "l2s" in plan.methods else None
    records = []
    for method in plan.methods:
        method_sizes = (0,) if method == "sgd" else sizes  # sgd: one pass, no budget
        for size in method_sizes:
            for rep in range(plan.reps):
                seed = cell_seed(plan.seed_base, method, size, rep)
                try:
                    x, reduce_ms, total_ms = _run_cell(method, A, size, seed,
                                                       plan, l2s_scores)
                    ratio = approximation_ratio(A, x, f_star)
                except Exception as exc:  # record the failure, keep going
                    print(f"[experiment] cell ({method}, {size}, {rep}) failed: {exc}",
                          file=log)
                    ratio, reduce_ms, total_ms = math.nan, math.nan, math.nan
                records.append(ResultRecord(dataset=data.name, method=method,
                                            size=size, rep=rep, ratio=ratio,
                                            reduce_ms=reduce_ms, total_ms=total_ms))
    if out_csv is not None:
        write_results_csv(out_csv, records)
        write_summary_csv(summary_path(out_csv), records)
    return records


def summary_path(out_csv) -> str:
    s = str(out_csv)
    return s[:-4] + "_summary.csv" if s.endswith(".csv") else s + "_summary.csv"


# --- plan files ----------------------------------------------------------------
#
# Flat `key = value` lines; # starts a comment. Keys:
#   dataset = synthetic | csv:<path> | libsvm:<path>
#   n, dataset_seed, name, add_intercept, noise_fraction, noise_sigma, noise_seed
#   methods = sketch,uniform,...      sizes = 100,200,...
#   size_min / size_max / size_steps  (alternative to sizes)
#   reps, seed_base, n_levels, sample_fraction


def parse_plan(path) -> ExperimentPlan:
    kv = {}
    with open(path) as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{ln}: expected key = value, got {line!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            kv[key] = val

    if "dataset" not in kv:
        raise ValueError(f"{path}: plan must set dataset=")
    dsval = kv.pop("dataset")
    if dsval == "synthetic":
        spec = DatasetSpec(kind="synthetic", n=int(kv.pop("n", "100000")))
    elif dsval.startswith("csv:"):
        spec = DatasetSpec(kind="csv", path=dsval[4:])
    elif dsval.startswith("libsvm:"):
        spec = DatasetSpec(kind="libsvm", path=dsval[7:])
    else:
        raise ValueError(f"{path}: unknown dataset {dsval!r}")
    spec.seed = int(kv.pop("dataset_seed", "0"))
    spec.name = kv.pop("name", "")
    spec.add_intercept = kv.pop("add_intercept", "true").lower() in ("true", "1", "yes")
    spec.noise_fraction = float(kv.pop("noise_fraction", "0"))
    spec.noise_sigma = float(kv.pop("noise_sigma", "0"))
    spec.noise_seed = int(kv.pop("noise_seed", "0"))

    methods = tuple(m.strip() for m in kv.pop("methods", ",".join(METHODS)).split(","))
    if "sizes" in kv:
        sizes = tuple(int(s) for s in kv.pop("sizes").split(","))
    elif "size_min" in kv:
        lo = int(kv.pop("size_min"))
        hi = int(kv.pop("size_max"))
        steps = int(kv.pop("size_steps", "30"))
        sizes = tuple(sorted(set(np.linspace(lo, hi, steps).astype(int).tolist())))
    else:
        sizes = ()
    plan = ExperimentPlan(dataset=spec, methods=methods, sizes=sizes,
                          reps=int(kv.pop("reps", "20")),
                          seed_base=int(kv.pop("seed_base", "0")),
                          n_levels=int(kv.pop("n_levels", "3")),
                          sample_fraction=float(kv.pop("sample_fraction", "1.0")))
    if kv:
        raise ValueError(f"{path}: unknown plan keys {sorted(kv)}")
    return plan
