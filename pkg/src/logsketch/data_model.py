"""Core data types: labeled datasets, signed design matrices, turnstile streams.

The turnstile model: a data matrix A is defined implicitly by a stream of
additive updates (i, j, v) meaning A[i, j] += v. Updates may arrive in any
order, values may be negative (deletions), and the same cell may be touched
many times; only the accumulated sum matters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TurnstileUpdate:
    """One additive update: A[row, col] += value."""

    row: int
    col: int
    value: float


@dataclass
class LabeledDataset:
    """Feature matrix X (n x d) with labels in {-1, +1}."""

    X: np.ndarray
    labels: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.X = np.ascontiguousarray(self.X, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.float64).ravel()
        if self.X.ndim != 2:
            raise ValueError("X must be a 2-d matrix")
        if self.labels.shape[0] != self.X.shape[0]:
            raise ValueError(
                f"label count {self.labels.shape[0]} != row count {self.X.shape[0]}"
            )

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]


@dataclass
class WeightedDataset:
    """Rows of a (reduced) signed matrix with strictly positive row weights."""

    rows: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.rows = np.ascontiguousarray(self.rows, dtype=np.float64)
        self.weights = np.asarray(self.weights, dtype=np.float64).ravel()
        if self.rows.ndim != 2:
            raise ValueError("rows must be a 2-d matrix")
        if self.weights.shape[0] != self.rows.shape[0]:
            raise ValueError("one weight per row required")
        if np.any(self.weights <= 0) or not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be finite and strictly positive")

    @property
    def size(self) -> int:
        return self.rows.shape[0]


def signed_design_matrix(data: LabeledDataset, add_intercept: bool = False) -> np.ndarray:
    """Signed matrix with rows a_i = -label_i * x_i.

    Minimizing sum_i log(1 + exp(a_i @ beta)) over beta is exactly logistic
    regression on (X, labels). With add_intercept a constant 1 column is
    appended to X before signing.
    """
    labels = data.labels
    bad = ~np.isin(labels, (-1.0, 1.0))
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ValueError(f"label {labels[i]!r} at row {i} is not in {{-1, +1}}")
    X = data.X
    if add_intercept:
        X = np.hstack([X, np.ones((X.shape[0], 1))])
    return -labels[:, None] * X


def to_update_stream(A, order: str = "row-major", split_factor: int = 1, seed: int = 0):
    """Emit matrix A as a list of turnstile updates.

    Each nonzero entry becomes split_factor updates whose values sum to the
    entry (random proportions when split_factor > 1). order is one of
    "row-major", "column-major", "shuffled".
    """
    A = np.asarray(A, dtype=np.float64)
    if split_factor < 1:
        raise ValueError("split_factor must be >= 1")
    rng = np.random.default_rng(seed)
    rows, cols = np.nonzero(A)
    if order == "column-major":
        o = np.lexsort((rows, cols))
        rows, cols = rows[o], cols[o]
    elif order == "shuffled":
        o = rng.permutation(rows.shape[0])
        rows, cols = rows[o], cols[o]
    elif order != "row-major":
        raise ValueError(f"unknown order {order!r}")
    updates = []
    for i, j in zip(rows.tolist(), cols.tolist()):
        v = float(A[i, j])
        if split_factor == 1:
            updates.append(TurnstileUpdate(i, j, v))
        else:
            parts = v * rng.dirichlet(np.ones(split_factor))
            parts[-1] = v - parts[:-1].sum()  # exact sum despite rounding
            for p in parts:
                updates.append(TurnstileUpdate(i, j, float(p)))
    if order == "shuffled" and split_factor > 1:
        perm = rng.permutation(len(updates))
        updates = [updates[t] for t in perm]
    return updates


def accumulate_updates(updates, n: int, d: int) -> np.ndarray:
    """Dense n x d matrix accumulated from a turnstile stream."""
    A = np.zeros((n, d))
    for t, u in enumerate(updates):
        if not (0 <= u.row < n and 0 <= u.col < d):
            raise ValueError(
                f"update #{t} ({u.row}, {u.col}, {u.value}) outside declared "
                f"shape ({n}, {d})"
            )
        A[u.row, u.col] += u.value
    return A


def updates_to_arrays(updates):
    """Split an update sequence into (rows, cols, values) arrays."""
    m = len(updates)
    rows = np.empty(m, dtype=np.int64)
    cols = np.empty(m, dtype=np.int64)
    vals = np.empty(m, dtype=np.float64)
    for t, u in enumerate(updates):
        rows[t] = u.row
        cols[t] = u.col
        vals[t] = u.value
    return rows, cols, vals


# --- turnstile text format ------------------------------------------------
#
#   #turnstile n=<n> d=<d>
#   row,col,value        (one update per line)


def write_turnstile(path, updates, n: int, d: int):
    with open(path, "w") as fh:
        fh.write(f"#turnstile n={n} d={d}\n")
        for u in updates:
            fh.write(f"{u.row},{u.col},{u.value!r}\n")


def parse_turnstile_header(line: str):
    parts = line.strip().split()
    if len(parts) != 3 or parts[0] != "#turnstile":
        raise ValueError(f"bad turnstile header: {line!r}")
    kv = dict(p.split("=", 1) for p in parts[1:])
    if set(kv) != {"n", "d"}:
        raise ValueError(f"turnstile header must declare n= and d=: {line!r}")
    return int(kv["n"]), int(kv["d"])


def read_turnstile(fh):
    """Parse a turnstile stream from an open text file.

    Returns (n, d, updates).
    """
    header = fh.readline()
    if not header:
        raise ValueError("empty turnstile stream")
    n, d = parse_turnstile_header(header)
    updates = []
    for ln, line in enumerate(fh, start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(",")
        if len(fields) != 3:
            raise ValueError(f"line {ln}: expected row,col,value, got {line!r}")
        try:
            u = TurnstileUpdate(int(fields[0]), int(fields[1]), float(fields[2]))
        except ValueError as exc:
            raise ValueError(f"line {ln}: {exc}") from None
        if not (0 <= u.row < n and 0 <= u.col < d):
            raise ValueError(f"line {ln}: index ({u.row}, {u.col}) outside ({n}, {d})")
        updates.append(u)
    return n, d, updates
