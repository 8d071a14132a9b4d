"""Oblivious multilevel bucket sketch for signed data matrices.

Structure: each row index is hashed to a level h in {0..h_max} with
geometrically decaying probability P(h) = 1/(beta * b^h), where
beta = (b - b^-h_max)/(b - 1) normalizes the distribution, and then to one
of N buckets at that level. A bucket cell stores the weighted sum
beta * b^h * (sum of assigned rows); the weight is applied at update time so
ingestion is a single fused multiply-add per update. A uniform row sample of
size k rides along as a separate block and covers the smooth (correctly
classified) part of the loss that buckets cannot see.

The whole construction is linear in the data, so it supports arbitrary
turnstile streams: updates in any order, with deletions, split across shards
that are merged by entrywise addition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import backend
from .data_model import TurnstileUpdate
from .hashing import assign_buckets, assign_levels, sample_row_indices


# --- configuration ----------------------------------------------------------


def derive_beta(b: float, h_max: int) -> float:
    """Normalizer of the level distribution: sum_h 1/(beta b^h) = 1."""
    if h_max < 0:
        raise ValueError("h_max must be >= 0")
    return (b - b ** (-h_max)) / (b - 1.0)


def default_branch(n: int, n_buckets: int, h_max: int) -> float:
    """Branch factor that makes the top level expect about n_buckets rows.

    Solves n / b^h_max = n_buckets, clamped to stay > 2.
    """
    if n_buckets < 1:
        raise ValueError("n_buckets must be >= 1")
    if h_max == 0:
        return 4.0
    b = (n / n_buckets) ** (1.0 / h_max)
    return max(b, 2.01)


@dataclass(frozen=True)
class SketchConfig:
    """Immutable sketch parameters.

    n, d: declared input shape. n_buckets: buckets per level (N).
    h_max: highest level (h_max + 1 levels total). b: branch factor.
    k: uniform sample size. seed: base seed for all hash assignments.
    clip: per-level count K used by the clipped objective (default N/4,
    rounded up).
    """

    n: int
    d: int
    n_buckets: int
    h_max: int
    b: float
    k: int
    seed: int = 0
    clip: int = -1  # -1 means "default to ceil(n_buckets / 4)"

    def __post_init__(self):
        if self.n <= 0 or self.d <= 0:
            raise ValueError("n and d must be positive")
        if self.n_buckets <= 0:
            raise ValueError("n_buckets must be positive")
        if self.h_max < 0:
            raise ValueError("h_max must be >= 0")
        if not self.b > 2.0:
            raise ValueError(f"branch factor b={self.b} must be > 2")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"sample size k={self.k} outside [0, n]")
        if self.clip == -1:
            object.__setattr__(self, "clip", math.ceil(self.n_buckets / 4))
        if not 1 <= self.clip <= self.n_buckets:
            raise ValueError(f"clip K={self.clip} outside [1, N={self.n_buckets}]")

    @property
    def beta(self) -> float:
        return derive_beta(self.b, self.h_max)

    @property
    def n_levels(self) -> int:
        return self.h_max + 1

    @property
    def bucket_rows(self) -> int:
        return self.n_levels * self.n_buckets

    @property
    def rows_total(self) -> int:
        return self.bucket_rows + self.k

    def level_probs(self) -> np.ndarray:
        h = np.arange(self.n_levels)
        return 1.0 / (self.beta * self.b ** h)

    def cum_probs(self) -> np.ndarray:
        c = np.cumsum(self.level_probs())
        c[-1] = 1.0  # exact by construction; pin against rounding
        return c

    def level_weights(self) -> np.ndarray:
        return self.beta * self.b ** np.arange(self.n_levels)


def make_config(n, d, n_buckets, n_levels=3, k=None, b=None, seed=0, clip=None):
    """Convenience constructor; derives b and k when not given."""
    h_max = n_levels - 1
    if b is None:
        b = default_branch(n, n_buckets, h_max)
    if k is None:
        k = min(n, n_buckets)
    return SketchConfig(n=n, d=d, n_buckets=n_buckets, h_max=h_max, b=b,
                        k=int(k), seed=seed, clip=-1 if clip is None else clip)


def config_for_size(size, n, d, n_levels=3, sample_fraction=1.0, seed=0):
    """Map a total summary-row budget to sketch parameters.

    N = ceil(size / (n_levels + sample_fraction)) buckets per level plus a
    uniform sample of k = round(sample_fraction * N) rows, so the finalized
    summary has about `size` rows.
    """
    if size < n_levels + 1:
        raise ValueError(f"size budget {size} too small for {n_levels} levels")
    n_buckets = math.ceil(size / (n_levels + sample_fraction))
    k = min(n, int(round(sample_fraction * n_buckets)))
    return make_config(n, d, n_buckets, n_levels=n_levels, k=k, seed=seed)


# --- hash assignment ops ----------------------------------------------------


def level_of(row: int, config: SketchConfig) -> int:
    """Level of a row index (deterministic in (row, config.seed))."""
    if not 0 <= row < config.n:
        raise ValueError(f"row {row} outside [0, n={config.n})")
    return int(assign_levels(np.array([row]), config.cum_probs(), config.seed)[0])


def bucket_of(row: int, level: int, config: SketchConfig) -> int:
    """Bucket of a row at a level (deterministic in (row, level, config.seed))."""
    if not 0 <= level <= config.h_max:
        raise ValueError(f"level {level} outside [0, h_max={config.h_max}]")
    return int(assign_buckets(np.array([row]), np.array([level]),
                              config.n_buckets, config.seed)[0])


# --- mutable accumulation state ---------------------------------------------


@dataclass
class SketchState:
    """Accumulated sketch: bucket table, sample block, slot lookup."""

    config: SketchConfig
    buckets: np.ndarray        # (n_levels * N, d) weighted bucket sums
    samples: np.ndarray        # (k, d) raw sampled rows
    sample_rows: np.ndarray    # sorted sampled row indices, shape (k,)
    sample_slots: np.ndarray   # (n,) row -> slot in samples, or -1
    cum: np.ndarray = field(repr=False, default=None)
    weights: np.ndarray = field(repr=False, default=None)

    @property
    def sample_index_map(self) -> dict:
        """Injective map from sampled row index to its slot."""
        return {int(r): i for i, r in enumerate(self.sample_rows)}

    def apply_update(self, u: TurnstileUpdate):
        """O(1) single-update path: two hash lookups, one or two adds."""
        cfg = self.config
        if not (0 <= u.row < cfg.n and 0 <= u.col < cfg.d):
            raise ValueError(
                f"update ({u.row}, {u.col}, {u.value}) outside declared "
                f"shape ({cfg.n}, {cfg.d})"
            )
        h = level_of(u.row, cfg)
        g = bucket_of(u.row, h, cfg)
        self.buckets[h * cfg.n_buckets + g, u.col] += self.weights[h] * u.value
        slot = self.sample_slots[u.row]
        if slot >= 0:
            self.samples[slot, u.col] += u.value

    def apply_update_batch(self, rows, cols, vals):
        """Vectorized ingest of many updates via the active kernel."""
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        cols = np.ascontiguousarray(cols, dtype=np.int64)
        vals = np.ascontiguousarray(vals, dtype=np.float64)
        cfg = self.config
        if rows.shape[0] == 0:
            return
        lo, hi = rows.min(), rows.max()
        if lo < 0 or hi >= cfg.n:
            bad = int(np.argmax((rows < 0) | (rows >= cfg.n)))
            raise ValueError(f"update #{bad} row {rows[bad]} outside [0, {cfg.n})")
        lo, hi = cols.min(), cols.max()
        if lo < 0 or hi >= cfg.d:
            bad = int(np.argmax((cols < 0) | (cols >= cfg.d)))
            raise ValueError(f"update #{bad} col {cols[bad]} outside [0, {cfg.d})")
        backend.ingest_updates(rows, cols, vals, self.buckets, self.samples,
                               self.sample_slots, self.cum, self.weights,
                               np.uint64(cfg.seed), cfg.n_buckets)


def init_sketch(config: SketchConfig) -> SketchState:
    """Fresh all-zeros state. Same config -> identical state."""
    k = config.k
    sample_rows = sample_row_indices(config.n, k, config.seed)
    slots = np.full(config.n, -1, dtype=np.int64)
    slots[sample_rows] = np.arange(k)
    return SketchState(
        config=config,
        buckets=np.zeros((config.bucket_rows, config.d)),
        samples=np.zeros((k, config.d)),
        sample_rows=sample_rows,
        sample_slots=slots,
        cum=config.cum_probs(),
        weights=config.level_weights(),
    )


def sketch_matrix(A, config: SketchConfig) -> SketchState:
    """Sketch a whole matrix at once.

    Independent of the streaming kernel (row-level scatter), but identical in
    result to init_sketch + apply_update over any decomposition of A.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    if A.shape != (config.n, config.d):
        raise ValueError(f"matrix shape {A.shape} != declared {(config.n, config.d)}")
    state = init_sketch(config)
    rows = np.arange(config.n, dtype=np.int64)
    lev = assign_levels(rows, state.cum, config.seed)
    g = assign_buckets(rows, lev, config.n_buckets, config.seed)
    flat = lev * config.n_buckets + g
    w = state.weights[lev]
    nb = state.buckets.shape[0]
    for j in range(config.d):
        state.buckets[:, j] += np.bincount(flat, weights=w * A[:, j], minlength=nb)
    if config.k > 0:
        state.samples += A[state.sample_rows]
    return state


def merge_states(a: SketchState, b: SketchState) -> SketchState:
    """Combine sketches of disjoint stream shards (valid by linearity)."""
    if a.config != b.config:
        raise ValueError("cannot merge sketches with different configs")
    return SketchState(config=a.config, buckets=a.buckets + b.buckets,
                       samples=a.samples + b.samples, sample_rows=a.sample_rows,
                       sample_slots=a.sample_slots, cum=a.cum, weights=a.weights)


# --- finalized summary -------------------------------------------------------


@dataclass
class SketchedDataset:
    """Finalized weighted summary ready for the solver.

    B stacks the rescaled bucket block (n_levels * N rows, each equal to
    N * max(h_max, 1) times the weighted bucket sum) on top of the k sampled
    rows. weights holds 1/(N * max(h_max, 1)) for bucket rows and n/k for
    sample rows. level_starts[h] is the first row of level h's block;
    sample_offset is the first sample row.
    """

    B: np.ndarray
    weights: np.ndarray
    config: SketchConfig
    level_starts: tuple
    sample_offset: int

    @property
    def n_buckets(self) -> int:
        return self.config.n_buckets

    @property
    def n_levels(self) -> int:
        return self.config.h_max + 1

    def bucket_block(self) -> np.ndarray:
        return self.B[: self.sample_offset]

    def sample_block(self) -> np.ndarray:
        return self.B[self.sample_offset:]


def finalize(state: SketchState) -> SketchedDataset:
    """Freeze a state into a weighted dataset.

    The bucket block is scaled by N * h_eff (h_eff = max(h_max, 1)) with
    matching weights 1/(N * h_eff); dividing each logistic term by the scale
    pinches it onto the positive-part function, so the weighted loss of the
    block tracks the positive-part mass of the unscaled sketch within an
    additive ln 2 per selected row. Sample rows carry weight n/k.
    """
    cfg = state.config
    h_eff = max(cfg.h_max, 1)
    scale = cfg.n_buckets * h_eff
    B = np.vstack([scale * state.buckets, state.samples])
    w = np.empty(B.shape[0])
    w[: cfg.bucket_rows] = 1.0 / scale
    if cfg.k > 0:
        w[cfg.bucket_rows:] = cfg.n / cfg.k
    starts = tuple(h * cfg.n_buckets for h in range(cfg.n_levels))
    return SketchedDataset(B=B, weights=w, config=cfg, level_starts=starts,
                           sample_offset=cfg.bucket_rows)


# --- serialization ------------------------------------------------------------
#
#   #sketch N=<N> b=<b> hmax=<h> k=<k> seed=<s> n=<n> d=<d>
#   weight,v_0,...,v_{d-1}        (one summary row per line)


def write_sketch_csv(path, sk: SketchedDataset):
    cfg = sk.config
    with open(path, "w") as fh:
        fh.write(
            f"#sketch N={cfg.n_buckets} b={float(cfg.b)!r} hmax={cfg.h_max} "
            f"k={cfg.k} seed={cfg.seed} n={cfg.n} d={cfg.d}\n"
        )
        for w, row in zip(sk.weights, sk.B):
            fh.write(",".join([repr(float(w))] + [repr(float(v)) for v in row]))
            fh.write("\n")


def read_sketch_csv(path) -> SketchedDataset:
    with open(path) as fh:
        header = fh.readline()
        parts = header.strip().split()
        if not parts or parts[0] != "#sketch":
            raise ValueError(f"bad sketch header: {header!r}")
        kv = dict(p.split("=", 1) for p in parts[1:])
        need = {"N", "b", "hmax", "k", "seed", "n", "d"}
        if set(kv) != need:
            raise ValueError(f"sketch header must declare {sorted(need)}: {header!r}")
        cfg = SketchConfig(n=int(kv["n"]), d=int(kv["d"]), n_buckets=int(kv["N"]),
                           h_max=int(kv["hmax"]), b=float(kv["b"]), k=int(kv["k"]),
                           seed=int(kv["seed"]))
        rows = []
        for ln, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            vals = [float(v) for v in line.split(",")]
            if len(vals) != cfg.d + 1:
                raise ValueError(f"line {ln}: expected {cfg.d + 1} fields, got {len(vals)}")
            rows.append(vals)
    arr = np.asarray(rows)
    if arr.shape[0] != cfg.rows_total:
        raise ValueError(
            f"sketch body has {arr.shape[0]} rows, header implies {cfg.rows_total}"
        )
    starts = tuple(h * cfg.n_buckets for h in range(cfg.n_levels))
    return SketchedDataset(B=np.ascontiguousarray(arr[:, 1:]), weights=arr[:, 0].copy(),
                           config=cfg, level_starts=starts,
                           sample_offset=cfg.bucket_rows)


# --- advisory parameter validation --------------------------------------------


@dataclass
class ValidationReport:
    """Advisory check of the sketch-size preconditions behind the guarantees."""

    ok: bool
    violations: list
    notes: list

    def __str__(self):
        lines = ["parameter check: " + ("OK" if self.ok else "VIOLATIONS")]
        lines += [f"  [violated] {v}" for v in self.violations]
        lines += [f"  [note] {s}" for s in self.notes]
        return "\n".join(lines)


def validate_theory_params(config: SketchConfig, mu: float, eps: float,
                           delta: float, m: int | None = None) -> ValidationReport:
    """Check the analysis preconditions for the given parameters.

    eps is the target relative accuracy; the analysis operates at the reduced
    accuracy eps / (mu + 1), which is what the inequalities below use. m is
    the sample-count parameter of the analysis (defaults to the bucket count).
    Advisory only: returns a report, never raises.
    """
    if m is None:
        m = config.n_buckets
    n, d, b, N = config.n, config.d, config.b, config.n_buckets
    beta = config.beta
    e = eps / (mu + 1.0)
    me2 = m * e * e
    violations, notes = [], []
    notes.append(f"analysis accuracy eps/(mu+1) = {e:.6g} (eps={eps:g}, mu={mu:g})")

    def check(lhs, rhs, text):
        if not lhs >= rhs:
            violations.append(f"{text}: {lhs:.6g} < {rhs:.6g}")

    check(me2, -4.0 * math.log(delta), "m*eps^2 >= -4 ln(delta)")
    arg = beta * m * math.log2(max(m / e, 1e-300))
    if arg > 0:
        check(me2, 3.0 * math.log(arg), "m*eps^2 >= 3 ln(beta m log2(m/eps))")
    arg = math.log2(max(n / (m * e), 1e-300)) + 1.0
    if arg > 0:
        check(me2, 2.0 * math.log(arg), "m*eps^2 >= 2 ln(log2(n/(m eps)) + 1)")
    check(me2, 2.0 * d * math.log1p(n / (m * e)) - math.log(delta),
          "m*eps^2 >= 2 d ln(1 + n/(m eps)) - ln(delta)")
    check(b, max(m, 1.0 / delta), "b >= max(m, 1/delta)")
    check(N, b * m * m * d * d / (e * delta), "N >= b m^2 d^2 / (eps delta)")
    if not violations:
        notes.append("all preconditions satisfied")
    return ValidationReport(ok=not violations, violations=violations, notes=notes)
