"""Backend selection for the hot kernels.

Numba is used when it is importable, unless ``SUBSEQRAND_BACKEND=numpy`` is set,
in which case every kernel runs through its pure numpy / Python twin.  Both
paths are bit-identical; only speed differs.
"""

from __future__ import annotations

import os

BACKEND_ENV = "SUBSEQRAND_BACKEND"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
_requested = os.environ.get(BACKEND_ENV, "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {_requested!r}")
USE_NUMBA = HAVE_NUMBA and _requested == "numba"
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(func):
    """Compile ``func`` with numba when available; otherwise return it untouched."""
    if numba is None:
        return func
    return numba.njit(cache=True, nogil=True)(func)
