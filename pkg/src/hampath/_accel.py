"""Numba switch.

Set ``HAMPATH_DISABLE_NUMBA=1`` to force the pure numpy/Python kernels. The flag
is read once at import time.
"""

import os

DISABLED = os.environ.get("HAMPATH_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED


def njit(fn):
    """``numba.njit(cache=True)`` when numba is usable, else a no-op."""
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True)(fn)
