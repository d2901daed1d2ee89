"""Hot kernels, compiled when available.

The Cython build is picked at import; set ``CUBIK_PURE=1`` to force the numpy
fallback.  ``BACKEND`` names whichever one is live.
"""
import os

from . import _pykernels as pure

compiled = None
if os.environ.get("CUBIK_PURE") != "1":
    try:
        from . import _ckernels as compiled
    except ImportError:  # pragma: no cover - depends on build
        compiled = None

_impl = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "numpy"

bfs_all_pairs = _impl.bfs_all_pairs
interval_masks = _impl.interval_masks
median_scan = _impl.median_scan
median_scan_triples = _impl.median_scan_triples
consistent_orientations = _impl.consistent_orientations

__all__ = [
    "BACKEND",
    "bfs_all_pairs",
    "compiled",
    "consistent_orientations",
    "interval_masks",
    "median_scan",
    "median_scan_triples",
    "pure",
]
