"""Numba backend selection.

The hot quadrature kernels are compiled with numba when it is importable.
Setting the environment variable RATIO_NORMAL_NO_NUMBA=1 (or numba failing
to import) selects the pure-numpy fallback path instead.  Both paths are
exercised by the test suite and compared by benchmarks/bench_quadrature.py.
"""

import os


def _noop_jit(*args, **kwargs):
    # usable both as @njit and @njit(...)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrap(func):
        return func

    return wrap


def _numba_enabled() -> bool:
    if os.environ.get("RATIO_NORMAL_NO_NUMBA", "").strip() in ("1", "true", "yes"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USE_NUMBA = _numba_enabled()

if USE_NUMBA:
    from numba import njit
else:
    njit = _noop_jit
