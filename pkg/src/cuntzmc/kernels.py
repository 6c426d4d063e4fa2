"""Kernel backend selection.

Imports the compiled Cython kernels when available, otherwise the
pure-Python twins.  Set CUNTZMC_PURE_PYTHON=1 to force the fallback
(used by the parity tests and the benchmark).
"""

import os

if os.environ.get("CUNTZMC_PURE_PYTHON"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

snf_kernel = _impl.snf_kernel
det_kernel = _impl.det_kernel

__all__ = ["snf_kernel", "det_kernel", "BACKEND"]
