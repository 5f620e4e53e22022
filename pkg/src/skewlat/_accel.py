"""Backend selection for the numeric kernels.

Set ``SKEWLAT_BACKEND=numpy`` (or ``SKEWLAT_DISABLE_NUMBA=1``) before import to
run every kernel on its pure-numpy / interpreted path.
"""
import os

_flag = os.environ.get("SKEWLAT_BACKEND", "").strip().lower()
_disabled = os.environ.get("SKEWLAT_DISABLE_NUMBA", "").strip() not in ("", "0")

USE_NUMBA = not _disabled and _flag != "numpy"

if USE_NUMBA:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when the numba backend is active, identity otherwise."""
    if USE_NUMBA:
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f
