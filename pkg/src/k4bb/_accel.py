"""Numba switch.

Set ``K4B_DISABLE_NUMBA=1`` to run every hot kernel through its pure-numpy
fallback instead of the compiled loop version.
"""

from __future__ import annotations

import os

_FALSEY = {"", "0", "false", "no", "off"}


def _numba_requested() -> bool:
    return os.environ.get("K4B_DISABLE_NUMBA", "").strip().lower() in _FALSEY


try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

HAVE_NUMBA = _numba is not None
USE_NUMBA = HAVE_NUMBA and _numba_requested()


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity otherwise.

    Compilation is lazy, so decorating a kernel costs nothing until the first
    call; the dispatch in :mod:`k4bb.kernels` decides which path is called.
    """
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    if _numba is None:
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f
    return _numba.njit(*args, **kwargs)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
