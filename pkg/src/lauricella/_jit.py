"""Numba shim.

The hot summation kernels in ``kernels.py`` come in two flavors: scalar
loops meant for numba's ``@njit``, and vectorized numpy fallbacks. Which
flavor is dispatched at runtime is controlled by the environment variable
``LAURICELLA_DISABLE_NUMBA``: set it to a non-empty value other than "0"
to force the numpy path even when numba is importable. Missing numba
degrades to the fallback automatically.

The flag is read once, at import time.
"""

import os

__all__ = ["njit", "prange", "NUMBA_ENABLED"]


def _identity_njit(*args, **kwargs):
    # supports both @njit and @njit(...) usage
    if args and callable(args[0]):
        return args[0]

    def wrap(fn):
        return fn

    return wrap


_disabled = os.environ.get("LAURICELLA_DISABLE_NUMBA", "").strip() not in ("", "0")

if _disabled:
    njit = _identity_njit
    prange = range
    NUMBA_ENABLED = False
else:
    try:
        from numba import njit, prange

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - exercised only without numba
        njit = _identity_njit
        prange = range
        NUMBA_ENABLED = False
