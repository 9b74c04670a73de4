"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
reference kernels are used. Setting ROUGHSIG_BACKEND=python forces the
fallback.
"""
import os

from . import _pykernels

if os.environ.get("ROUGHSIG_BACKEND", "").lower() == "python":
    kernels = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as kernels
    except ImportError:
        kernels = _pykernels
        BACKEND = "python"
    else:
        BACKEND = "cython"
