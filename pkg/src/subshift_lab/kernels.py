"""Kernel backend selection.

The compiled Cython module is used when it was built; set
``SUBSHIFT_LAB_PURE=1`` to force the pure-Python implementation.
"""
import os

from . import _kernels_py

if os.environ.get("SUBSHIFT_LAB_PURE"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

run_word = _impl.run_word
batch_run = _impl.batch_run
enumerate_words = _impl.enumerate_words
count_occurrences = _impl.count_occurrences

__all__ = ["BACKEND", "run_word", "batch_run", "enumerate_words", "count_occurrences"]
