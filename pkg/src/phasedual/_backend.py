"""Pick the kernel implementation at import time.

The compiled extension is used when it was built; set
``PHASEDUAL_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("PHASEDUAL_PURE_PYTHON") == "1":
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _kernels_py
        BACKEND = "python"
    else:
        BACKEND = "cython"

__all__ = ["kernels", "BACKEND"]
