"""Numba toggle.

Kernels are written as plain Python over numpy arrays and compiled with
``numba.njit`` unless ``PEBBLEMOTION_JIT=0`` is set (or numba is missing),
in which case the same functions run in the interpreter.
"""

from __future__ import annotations

import os

_OFF = {"0", "false", "no", "off"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

JIT_ENABLED = numba is not None and os.environ.get("PEBBLEMOTION_JIT", "1").lower() not in _OFF


def njit(fn):
    """Compile ``fn`` when the JIT is enabled; otherwise return it unchanged.

    The original function stays reachable as ``fn.py_func`` in both modes so
    benchmarks can time the interpreted path inside a jitted process.
    """
    if JIT_ENABLED:
        return numba.njit(cache=True)(fn)
    fn.py_func = fn
    return fn
