"""Kernel selection.

The compiled extension is used when it imports; otherwise the pure-Python
module is used. Setting ``SLQTRACE_PURE=1`` forces the fallback.
"""

from __future__ import annotations

import os

BACKEND = "python"

if os.environ.get("SLQTRACE_PURE", "") not in ("", "0"):
    from ._kernels_py import BilinearForm, laurent_mul, torus_mul
else:
    try:
        from ._kernels import BilinearForm, laurent_mul, torus_mul

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._kernels_py import BilinearForm, laurent_mul, torus_mul

__all__ = ["BACKEND", "BilinearForm", "laurent_mul", "torus_mul"]
