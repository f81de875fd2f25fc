"""Kernel backend selection.

The compiled Cython extension is preferred; the pure numpy/Python module is
the fallback.  Set ``STABLESHOT_BACKEND=python`` to force the fallback (used
by the benchmark and the backend-equivalence tests).
"""

import os

from . import _kernels_py

if os.environ.get("STABLESHOT_BACKEND", "").lower() == "python":
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py


def backend_name() -> str:
    """Name of the active kernel backend: 'cython' or 'python'."""
    return kernels.BACKEND
