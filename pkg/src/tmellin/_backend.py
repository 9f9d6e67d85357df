"""Kernel backend selection.

The compiled kernels are used when the extension was built; otherwise, or
when ``TMELLIN_PURE_PYTHON`` is set to a non-empty value other than ``0``,
the pure-Python kernels are loaded instead. Both expose the same functions.
"""
import os

from . import _pykernels

pure = _pykernels


def _load():
    if os.environ.get("TMELLIN_PURE_PYTHON", "") not in ("", "0"):
        return _pykernels, "python"
    try:
        from . import _ckernels
    except ImportError:
        return _pykernels, "python"
    return _ckernels, "cython"


kernels, BACKEND = _load()


def compiled():
    """The compiled kernel module, or None if it was not built."""
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels
