"""Numba switch.

Set ``SPINTOMO_DISABLE_NUMBA=1`` to force the pure-numpy code paths, e.g.
for debugging or on platforms without numba. ``TOMO_THREADS`` caps the
number of numba worker threads.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}

DISABLED = os.environ.get("SPINTOMO_DISABLE_NUMBA", "").strip().lower() not in _FALSY

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not DISABLED

numba_default = {
    "nogil": True,
    "cache": True,
    "fastmath": False,
    "error_model": "numpy",
}

numba_parallel = dict(numba_default, parallel=True)


def njit(**overrides):
    """``numba.njit`` with project defaults; identity when numba is absent."""
    opts = dict(numba_default, **overrides)

    def wrap(func):
        if not HAVE_NUMBA:
            return func
        return numba.njit(**opts)(func)

    return wrap


if HAVE_NUMBA:
    prange = numba.prange
    if "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
        # try tbb last: older system tbb builds are rejected with a warning
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    _threads = os.environ.get("TOMO_THREADS")
    if _threads:
        numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))
else:  # pragma: no cover
    prange = range
