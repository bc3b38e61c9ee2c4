"""Kernel backend selection.

The special-function kernels exist twice: a Cython extension
(`lrlvec._kernels_cy`) and a pure-Python fallback (`lrlvec._kernels_py`)
with identical signatures.  The compiled module wins when importable; set
the environment variable LRLVEC_PURE_PYTHON=1 to force the fallback (used
by the backend-parity tests and the benchmark).
"""

import os

from . import _kernels_py

if os.environ.get("LRLVEC_PURE_PYTHON"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels_cy as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND_NAME = kernels.BACKEND_NAME


def available_backends():
    """Return the importable kernel modules keyed by name."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels_cy
        out["cython"] = _kernels_cy
    except ImportError:
        pass
    return out
