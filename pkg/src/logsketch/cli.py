"""Command line interface.

Subcommands: gen-synthetic, sketch, solve, experiment, validate-params.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .data_model import accumulate_updates, read_turnstile, signed_design_matrix, updates_to_arrays
from .datasets import gen_synthetic, read_csv_dataset, read_libsvm, write_csv_dataset
from .experiment import parse_plan, run_experiment, summary_path
from .objectives import ClipSpec
from .sketch import (SketchConfig, default_branch, finalize, init_sketch,
                     make_config, read_sketch_csv, validate_theory_params,
                     write_sketch_csv)
from .solver import SolveOptions, minimize_clipped, minimize_weighted


def _cmd_gen_synthetic(args):
    data = gen_synthetic(args.n, seed=args.seed)
    write_csv_dataset(args.out, data)
    print(f"wrote {data.n} rows (d={data.d}) to {args.out}")


def _cmd_sketch(args):
    n_levels = args.levels
    if n_levels < 1:
        raise SystemExit("--levels must be >= 1")
    if args.format == "turnstile":
        fh = sys.stdin if args.infile == "-" else open(args.infile)
        try:
            n, d, updates = read_turnstile(fh)
        finally:
            if fh is not sys.stdin:
                fh.close()
        cfg = make_config(n, d, args.buckets, n_levels=n_levels, k=args.sample,
                          b=args.branch, seed=args.seed)
        state = init_sketch(cfg)
        rows, cols, vals = updates_to_arrays(updates)
        state.apply_update_batch(rows, cols, vals)
    else:
        if args.infile == "-":
            raise SystemExit("stdin input is only supported for --format turnstile")
        loader = read_libsvm if args.format == "libsvm" else read_csv_dataset
        data = loader(args.infile)
        A = signed_design_matrix(data, add_intercept=args.intercept)
        from .sketch import sketch_matrix

        cfg = make_config(A.shape[0], A.shape[1], args.buckets, n_levels=n_levels,
                          k=args.sample, b=args.branch, seed=args.seed)
        state = sketch_matrix(A, cfg)
    sk = finalize(state)
    write_sketch_csv(args.out, sk)
    print(f"wrote sketch with {sk.B.shape[0]} rows (d={sk.B.shape[1]}) to {args.out}")


def _parse_clip(value: str, n_buckets: int) -> int:
    v = float(value)
    if v <= 0:
        raise SystemExit("--clip must be positive")
    if v < 1.0:
        return max(1, math.ceil(v * n_buckets))
    if v != int(v):
        raise SystemExit("--clip must be an integer count or a fraction < 1")
    return int(v)


def _cmd_solve(args):
    sk = read_sketch_csv(args.sketch)
    if args.clip is None:
        res = minimize_weighted(sk.B, sk.weights)
        objective = "weighted"
        K = None
    else:
        K = _parse_clip(args.clip, sk.config.n_buckets)
        res = minimize_clipped(sk, ClipSpec.from_sketch(sk, K=K),
                               opts=SolveOptions(max_iters=2000))
        objective = "clipped"
    model = {"x": [float(v) for v in res.x], "loss": res.loss, "iters": res.iters,
             "converged": res.converged, "objective": objective, "clip": K}
    with open(args.out_model, "w") as fh:
        json.dump(model, fh, indent=2)
        fh.write("\n")
    print(f"solved ({objective}): loss={res.loss:.6g} iters={res.iters} "
          f"converged={res.converged}")


def _cmd_experiment(args):
    plan = parse_plan(args.config)
    records = run_experiment(plan, out_csv=args.out)
    ok = sum(1 for r in records if not math.isnan(r.ratio))
    print(f"wrote {len(records)} cells ({ok} ok) to {args.out} "
          f"and {summary_path(args.out)}")


def _cmd_validate_params(args):
    cfg = SketchConfig(n=args.n, d=args.d, n_buckets=args.buckets,
                       h_max=args.levels - 1, k=min(args.sample, args.n),
                       b=args.branch if args.branch is not None
                       else default_branch(args.n, args.buckets, args.levels - 1))
    report = validate_theory_params(cfg, mu=args.mu, eps=args.eps,
                                    delta=args.delta, m=args.m)
    print(report)


def build_parser():
    p = argparse.ArgumentParser(prog="logsketch",
                                description="Streaming sketches for logistic regression")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-synthetic", help="write the bulk-plus-outliers dataset as CSV")
    g.add_argument("--n", type=int, required=True, help="bulk row count")
    g.add_argument("--out", required=True)
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=_cmd_gen_synthetic)

    s = sub.add_parser("sketch", help="sketch a dataset or turnstile stream")
    s.add_argument("--in", dest="infile", required=True,
                   help="input path, or - for stdin (turnstile format only)")
    s.add_argument("--format", choices=("libsvm", "csv", "turnstile"), required=True)
    s.add_argument("--levels", type=int, required=True, help="number of levels")
    s.add_argument("--buckets", type=int, required=True, help="buckets per level")
    s.add_argument("--sample", type=int, required=True, help="uniform sample size")
    s.add_argument("--branch", type=float, default=None, help="branch factor b (> 2)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--intercept", action="store_true",
                   help="append a constant-1 column before signing (csv/libsvm)")
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_sketch)

    v = sub.add_parser("solve", help="minimize the loss of a stored sketch")
    v.add_argument("--sketch", required=True)
    v.add_argument("--clip", default=None,
                   help="top-K count (integer) or per-level fraction (< 1)")
    v.add_argument("--out-model", required=True)
    v.set_defaults(func=_cmd_solve)

    e = sub.add_parser("experiment", help="run a benchmark plan")
    e.add_argument("--config", required=True, help="plan file (key = value lines)")
    e.add_argument("--out", required=True, help="results CSV path")
    e.set_defaults(func=_cmd_experiment)

    c = sub.add_parser("validate-params", help="advisory check of analysis preconditions")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--mu", type=float, required=True)
    c.add_argument("--eps", type=float, required=True)
    c.add_argument("--delta", type=float, required=True)
    c.add_argument("--buckets", type=int, default=256)
    c.add_argument("--levels", type=int, default=3)
    c.add_argument("--sample", type=int, default=256)
    c.add_argument("--branch", type=float, default=None)
    c.add_argument("--m", type=int, default=None,
                   help="analysis sample-count parameter (default: buckets)")
    c.set_defaults(func=_cmd_validate_params)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValueError as exc:
        # bad user input (malformed file, impossible configuration, ...)
        raise SystemExit(f"error: {exc}") from exc
    return 0


if __name__ == "__main__":
    sys.exit(main())
