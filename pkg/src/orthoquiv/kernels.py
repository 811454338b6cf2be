"""Kernel selection.

The compiled module ``_ckernels`` is used when it was built; otherwise the
pure-Python ``_pykernels`` is imported.  Setting ``ORTHOQUIV_PURE_PYTHON=1``
forces the fallback (the benchmark and the kernel-agreement tests use this).
"""

import os

from . import _pykernels as python_impl

try:
    if os.environ.get("ORTHOQUIV_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python kernels requested")
    from . import _ckernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = python_impl
    BACKEND = "python"

compiled_impl = _impl if BACKEND == "cython" else None

eval_words = _impl.eval_words
int_rank = _impl.int_rank
int_rank_split = _impl.int_rank_split

__all__ = ["BACKEND", "eval_words", "int_rank", "int_rank_split"]
