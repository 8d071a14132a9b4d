"""Dataset loading, generation, corruption, and results-CSV helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .data_model import LabeledDataset


def _map_labels(raw, where: str) -> np.ndarray:
    """Map a binary label column onto {-1, +1}.

    {-1,+1} is kept; otherwise the smaller of exactly two distinct values
    becomes -1 (covers 0/1 and 1/2 conventions). Anything else errors.
    """
    raw = np.asarray(raw, dtype=np.float64)
    values = np.unique(raw)
    if values.size > 2:
        raise ValueError(f"{where}: {values.size} distinct labels, need binary")
    if set(values.tolist()) <= {-1.0, 1.0}:
        return raw
    if values.size == 1:
        raise ValueError(f"{where}: single label value {values[0]} is ambiguous")
    lo, hi = values
    out = np.where(raw == lo, -1.0, 1.0)
    return out


# --- LIBSVM sparse text format ------------------------------------------------


def read_libsvm(path, d: int | None = None, name: str = "") -> LabeledDataset:
    """Load `<label> <index>:<value> ...` lines (1-based indices) densely.

    Absent features are zero. d is inferred from the largest index unless
    given. Labels are mapped to {-1, +1}.
    """
    labels, rows = [], []
    max_idx = 0
    with open(path) as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            try:
                labels.append(float(fields[0]))
            except ValueError:
                raise ValueError(f"{path}:{ln}: bad label {fields[0]!r}") from None
            entries = []
            for f in fields[1:]:
                try:
                    idx, val = f.split(":", 1)
                    idx, val = int(idx), float(val)
                except ValueError:
                    raise ValueError(f"{path}:{ln}: bad feature entry {f!r}") from None
                if idx < 1:
                    raise ValueError(f"{path}:{ln}: index {idx} must be >= 1")
                entries.append((idx, val))
                max_idx = max(max_idx, idx)
            rows.append(entries)
    if not rows:
        raise ValueError(f"{path}: empty LIBSVM file")
    dim = max_idx if d is None else d
    if max_idx > dim:
        raise ValueError(f"{path}: feature index {max_idx} exceeds declared d={dim}")
    X = np.zeros((len(rows), dim))
    for i, entries in enumerate(rows):
        for idx, val in entries:
            X[i, idx - 1] = val
    return LabeledDataset(X=X, labels=_map_labels(labels, path), name=name or str(path))


def write_libsvm(path, data: LabeledDataset):
    """Inverse of read_libsvm (nonzero entries only, 1-based indices)."""
    with open(path, "w") as fh:
        for x, l in zip(data.X, data.labels):
            parts = [f"{int(l):+d}"]
            nz = np.nonzero(x)[0]
            parts += [f"{j + 1}:{float(x[j])!r}" for j in nz]
            fh.write(" ".join(parts) + "\n")


# --- dense CSV ------------------------------------------------------------------


def read_csv_dataset(path, name: str = "") -> LabeledDataset:
    """Load a dense CSV with a header row; the last column is the label."""
    with open(path) as fh:
        header = fh.readline()
        if not header.strip():
            raise ValueError(f"{path}: empty CSV")
        width = len(header.strip().split(","))
        rows = []
        for ln, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != width:
                raise ValueError(
                    f"{path}:{ln}: expected {width} fields, got {len(fields)}"
                )
            try:
                rows.append([float(v) for v in fields])
            except ValueError as exc:
                raise ValueError(f"{path}:{ln}: {exc}") from None
    if not rows:
        raise ValueError(f"{path}: CSV has a header but no data rows")
    arr = np.asarray(rows)
    return LabeledDataset(X=arr[:, :-1], labels=_map_labels(arr[:, -1], path),
                          name=name or str(path))


def write_csv_dataset(path, data: LabeledDataset):
    with open(path, "w") as fh:
        fh.write(",".join([f"f{j}" for j in range(data.d)] + ["label"]) + "\n")
        for x, l in zip(data.X, data.labels):
            fh.write(",".join([repr(float(v)) for v in x] + [f"{int(l):d}"]) + "\n")


# --- generators -----------------------------------------------------------------


def gen_synthetic(n: int, seed: int = 0, jitter: float = 0.0) -> LabeledDataset:
    """Bulk-plus-outliers dataset where subsampling provably fails.

    n bulk rows at (1, 0) labeled +1, plus two outlier rows at (1, M) with
    M = n/2, labeled +1 and -1 (one each). The opposing labels at one far
    location make the pair pivotal: any summary that misses it steers the
    optimizer somewhere the full loss is enormous, yet the pair is exactly
    the kind of heavy row a bucket sketch preserves.

    Leverage profile (checked exactly in tests): every bulk row has
    l1-leverage 1/n and l2-leverage 1/n; each outlier has both equal to 1/2.
    The seed only feeds optional bulk jitter (default off).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    M = n / 2.0
    X = np.ones((n + 2, 2))
    X[:n, 1] = 0.0
    X[n:, 1] = M
    labels = np.ones(n + 2)
    labels[n + 1] = -1.0
    if jitter > 0.0:
        rng = np.random.default_rng(seed)
        X[:n] += jitter * rng.standard_normal((n, 2))
    return LabeledDataset(X=X, labels=labels, name=f"synthetic-{n}")


def gen_clouds(n: int, sep: float = 2.0, sigma: float = 0.75, d: int = 2,
               seed: int = 0) -> LabeledDataset:
    """Two Gaussian clouds, one per class: the easy case for uniform sampling.

    Means at (+-sep/2, 0, ..., 0), isotropic spread sigma, n/2 points per
    class. The clouds overlap (about 9% of points sit on the wrong side of
    the midline at the defaults), so the optimum is finite and interior and
    even small subsamples see a non-separable problem.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = np.random.default_rng(seed)
    labels = np.ones(n)
    labels[n // 2:] = -1.0
    labels = labels[rng.permutation(n)]
    X = sigma * rng.standard_normal((n, d))
    X[:, 0] += labels * (sep / 2.0)
    return LabeledDataset(X=X, labels=labels, name=f"clouds-{n}")


def add_noise(data: LabeledDataset, fraction: float, sigma: float,
              seed: int = 0) -> LabeledDataset:
    """Corrupt floor(fraction * n) uniformly chosen rows with additive
    N(0, sigma^2) feature noise. Labels and the other rows are untouched."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must lie in [0, 1]")
    m = int(math.floor(fraction * data.n))
    X = data.X.copy()
    if m > 0:
        rng = np.random.default_rng(seed)
        idx = rng.choice(data.n, size=m, replace=False)
        X[idx] += sigma * rng.standard_normal((m, data.d))
    return LabeledDataset(X=X, labels=data.labels.copy(),
                          name=data.name + f"+noise{fraction:g}")


# --- dataset descriptions (for plans and the harness) -----------------------------


@dataclass
class DatasetSpec:
    """Where a dataset comes from and how to prepare it."""

    kind: str                    # "synthetic" | "csv" | "libsvm"
    path: str = ""
    n: int = 0                   # synthetic only
    seed: int = 0
    add_intercept: bool = True
    noise_fraction: float = 0.0
    noise_sigma: float = 0.0
    noise_seed: int = 0
    name: str = ""

    def load(self) -> LabeledDataset:
        if self.kind == "synthetic":
            data = gen_synthetic(self.n, seed=self.seed)
        elif self.kind == "csv":
            data = read_csv_dataset(self.path)
        elif self.kind == "libsvm":
            data = read_libsvm(self.path)
        else:
            raise ValueError(f"unknown dataset kind {self.kind!r}")
        if self.noise_fraction > 0.0:
            data = add_noise(data, self.noise_fraction, self.noise_sigma,
                             seed=self.noise_seed)
        if self.name:
            data.name = self.name
        return data


# --- results CSV -------------------------------------------------------------------

RESULT_COLUMNS = ("dataset", "method", "size", "rep", "ratio", "reduce_ms", "total_ms")


@dataclass
class ResultRecord:
    dataset: str
    method: str
    size: int
    rep: int
    ratio: float
    reduce_ms: float
    total_ms: float


def write_results_csv(path, records):
    with open(path, "w") as fh:
        fh.write(",".join(RESULT_COLUMNS) + "\n")
        for r in records:
            fh.write(f"{r.dataset},{r.method},{r.size},{r.rep},"
                     f"{float(r.ratio)!r},{r.reduce_ms:.3f},{r.total_ms:.3f}\n")


def read_results_csv(path):
    records = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header.split(",") != list(RESULT_COLUMNS):
            raise ValueError(f"{path}: unexpected results header {header!r}")
        for ln, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            f = line.split(",")
            if len(f) != len(RESULT_COLUMNS):
                raise ValueError(f"{path}:{ln}: expected {len(RESULT_COLUMNS)} fields")
            records.append(ResultRecord(dataset=f[0], method=f[1], size=int(f[2]),
                                        rep=int(f[3]), ratio=float(f[4]),
                                        reduce_ms=float(f[5]), total_ms=float(f[6])))
    return records


def summarize_records(records):
    """Median ratio/time per (dataset, method, size), sorted for output."""
    groups = {}
    for r in records:
        groups.setdefault((r.dataset, r.method, r.size), []).append(r)
    out = []
    for (ds, method, size), rs in sorted(groups.items()):
        ratios = np.array([r.ratio for r in rs])
        valid = ratios[~np.isnan(ratios)]
        med = float(np.median(valid)) if valid.size else float("nan")
        out.append({
            "dataset": ds, "method": method, "size": size,
            "median_ratio": med,
            "median_reduce_ms": float(np.median([r.reduce_ms for r in rs])),
            "median_total_ms": float(np.median([r.total_ms for r in rs])),
            "reps": len(rs),
        })
    return out


def write_summary_csv(path, records):
    rows = summarize_records(records)
    cols = ("dataset", "method", "size", "median_ratio", "median_reduce_ms",
            "median_total_ms", "reps")
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for row in rows:
            fh.write(f"{row['dataset']},{row['method']},{row['size']},"
                     f"{float(row['median_ratio'])!r},{row['median_reduce_ms']:.3f},"
                     f"{row['median_total_ms']:.3f},{row['reps']}\n")
