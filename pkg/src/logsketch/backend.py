"""Selects the turnstile ingest kernel at import time.

Prefers the compiled Cython extension; falls back to the vectorized NumPy
kernel when the extension was not built. Both expose the same
ingest_updates(...) contract and identical hash assignments.
"""

from __future__ import annotations

from . import _ingest_py

try:
    from . import _ingest  # compiled extension, optional
except ImportError:  # pragma: no cover - depends on build environment
    _ingest = None

_active = _ingest if _ingest is not None else _ingest_py

BACKEND = _active.BACKEND
ingest_updates = _active.ingest_updates


def kernel_backends():
    """Mapping of available kernel name -> module (for parity tests/benchmarks)."""
    out = {"python": _ingest_py}
    if _ingest is not None:
        out["compiled"] = _ingest
    return out
