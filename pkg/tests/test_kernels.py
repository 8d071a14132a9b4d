"""Tests for the ingest kernels: python/compiled parity and batch semantics."""

import numpy as np
import pytest

from logsketch import backend
from logsketch.data_model import TurnstileUpdate
from logsketch.sketch import init_sketch, make_config


def _random_batch(cfg, n_updates, seed, include_repeats=True):
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, cfg.n, size=n_updates).astype(np.int64)
    cols = rng.integers(0, cfg.d, size=n_updates).astype(np.int64)
    vals = rng.standard_normal(n_updates)
    if include_repeats and n_updates >= 4:
        # Force repeated (row, col) pairs so accumulation order matters.
        rows[1] = rows[0]
        cols[1] = cols[0]
        rows[3] = rows[2]
        cols[3] = cols[2]
        vals[3] = -vals[2]  # includes a cancellation
    return rows, cols, vals


def _fresh_state(seed=0):
    cfg = make_config(n=500, d=4, n_buckets=16, n_levels=3, k=20, seed=seed)
    return init_sketch(cfg)


class TestBackendSelection:
    def test_backend_name(self):
        assert backend.BACKEND in ("python", "compiled")

    def test_python_kernel_always_available(self):
        assert "python" in backend.kernel_backends()


class TestKernelParity:
    @pytest.mark.skipif(
        "compiled" not in backend.kernel_backends(),
        reason="compiled kernel not built",
    )
    @pytest.mark.parametrize("batch_seed", [0, 1, 2, 3, 4])
    def test_bitwise_parity(self, batch_seed):
        kernels = backend.kernel_backends()
        states = {name: _fresh_state(seed=7) for name in ("python", "compiled")}
        cfg = states["python"].config
        rows, cols, vals = _random_batch(cfg, 5000, seed=batch_seed)
        for name, st in states.items():
            kernels[name].ingest_updates(
                rows, cols, vals, st.buckets, st.samples, st.sample_slots,
                st.cum, st.weights, np.uint64(cfg.seed), cfg.n_buckets,
            )
        np.testing.assert_array_equal(
            states["python"].buckets, states["compiled"].buckets
        )
        np.testing.assert_array_equal(
            states["python"].samples, states["compiled"].samples
        )

    @pytest.mark.skipif(
        "compiled" not in backend.kernel_backends(),
        reason="compiled kernel not built",
    )
    def test_parity_with_negative_only_stream(self):
        kernels = backend.kernel_backends()
        states = {name: _fresh_state(seed=3) for name in ("python", "compiled")}
        cfg = states["python"].config
        rows, cols, vals = _random_batch(cfg, 1000, seed=9)
        vals = -np.abs(vals)
        for name, st in states.items():
            kernels[name].ingest_updates(
                rows, cols, vals, st.buckets, st.samples, st.sample_slots,
                st.cum, st.weights, np.uint64(cfg.seed), cfg.n_buckets,
            )
        np.testing.assert_array_equal(
            states["python"].buckets, states["compiled"].buckets
        )
        np.testing.assert_array_equal(
            states["python"].samples, states["compiled"].samples
        )


class TestBatchVsScalar:
    def test_single_update_matches_scalar_path(self):
        a = _fresh_state()
        b = _fresh_state()
        u = TurnstileUpdate(row=17, col=2, value=-3.25)
        a.apply_update(u)
        b.apply_update_batch(
            np.array([u.row]), np.array([u.col]), np.array([u.value])
        )
        np.testing.assert_array_equal(a.buckets, b.buckets)
        np.testing.assert_array_equal(a.samples, b.samples)

    def test_batch_matches_scalar_sequence(self):
        a = _fresh_state()
        b = _fresh_state()
        cfg = a.config
        rows, cols, vals = _random_batch(cfg, 2000, seed=5)
        for r, c, v in zip(rows, cols, vals):
            a.apply_update(TurnstileUpdate(int(r), int(c), float(v)))
        b.apply_update_batch(rows, cols, vals)
        np.testing.assert_allclose(a.buckets, b.buckets, rtol=0, atol=1e-12)
        np.testing.assert_allclose(a.samples, b.samples, rtol=0, atol=1e-12)

    def test_empty_batch_is_a_no_op(self):
        a = _fresh_state()
        before = a.buckets.copy()
        a.apply_update_batch(
            np.array([], dtype=np.int64),
            np.array([], dtype=np.int64),
            np.array([], dtype=np.float64),
        )
        np.testing.assert_array_equal(a.buckets, before)

    def test_batch_bounds_checks(self):
        a = _fresh_state()
        with pytest.raises(ValueError):
            a.apply_update_batch(
                np.array([a.config.n]), np.array([0]), np.array([1.0])
            )
        with pytest.raises(ValueError):
            a.apply_update_batch(
                np.array([0]), np.array([a.config.d]), np.array([1.0])
            )

    def test_scalar_bounds_checks(self):
        a = _fresh_state()
        with pytest.raises(ValueError):
            a.apply_update(TurnstileUpdate(row=-1, col=0, value=1.0))
        with pytest.raises(ValueError):
            a.apply_update(TurnstileUpdate(row=0, col=99, value=1.0))
