"""Hot graph kernels with a numba backend and a pure-numpy fallback.

The backend is chosen once at import time from ``NPKG_BACKEND``:

* ``numba`` (default when numba imports) - compiled per-node loops
* ``numpy`` - vectorized layer-at-a-time fallback

Both backends return identical results; ``tests/test_kernels.py`` checks that
and ``benchmarks/bench_kernels.py`` compares their speed.
"""
import importlib
import logging
import os

from npkg.kernels._csr import build_csr, gather_neighbors

logger = logging.getLogger(__name__)

BACKENDS = ("numba", "numpy")


def load_backend(name: str):
    if name not in BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; choose from {BACKENDS}")
    return importlib.import_module(f"npkg.kernels._{name}")


def _select():
    requested = os.environ.get("NPKG_BACKEND", "").strip().lower()
    if requested:
        return requested, load_backend(requested)
    try:
        return "numba", load_backend("numba")
    except ImportError:
        logger.info("numba unavailable; using numpy kernels")
        return "numpy", load_backend("numpy")


BACKEND, _impl = _select()

bfs_distances = _impl.bfs_distances
bidirectional_bfs = _impl.bidirectional_bfs
transitive_closure = _impl.transitive_closure
shortest_path_nodes = _impl.shortest_path_nodes

__all__ = [
    "BACKEND",
    "BACKENDS",
    "bfs_distances",
    "bidirectional_bfs",
    "build_csr",
    "gather_neighbors",
    "load_backend",
    "shortest_path_nodes",
    "transitive_closure",
]
