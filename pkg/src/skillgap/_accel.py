"""Numba acceleration switch.

Hot kernels exist twice: a ``@njit`` loop version and a pure-numpy version.
The numba path is used when numba imports and ``SKILLGAP_NUMBA`` is not set to
``0``/``false``/``off``.  Both paths consume the same random stream and are
expected to produce bit-identical results.
"""
from __future__ import annotations

import os

_FLAG = os.environ.get("SKILLGAP_NUMBA", "1").strip().lower()

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorator(func):
            return func

        return decorator


USE_NUMBA = HAVE_NUMBA and _FLAG not in {"0", "false", "off", "no"}

__all__ = ["HAVE_NUMBA", "USE_NUMBA", "njit"]
