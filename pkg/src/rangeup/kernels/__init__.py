"""Kernel backend selection.

The compiled Cython backend is used when its extension module imported
successfully; otherwise the pure-numpy fallback takes over.  Setting the
environment variable ``RANGEUP_PURE_PYTHON=1`` forces the fallback, which is
mainly useful for the backend-comparison benchmark and tests.
"""

import os

from . import py_backend

if os.environ.get("RANGEUP_PURE_PYTHON"):
    _impl = py_backend
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = py_backend

BACKEND = _impl.NAME

min_scatter = _impl.min_scatter
raycast = _impl.raycast
nearest_sqdist = _impl.nearest_sqdist

__all__ = ["BACKEND", "min_scatter", "raycast", "nearest_sqdist", "py_backend"]
