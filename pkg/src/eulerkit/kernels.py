"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
module is used. Set ``EULERKIT_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("EULERKIT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

conv = _impl.conv
bmul = _impl.bmul
baxpy = _impl.baxpy
bcompose = _impl.bcompose
ashift = _impl.ashift
normalize = _impl.normalize

__all__ = ["BACKEND", "conv", "bmul", "baxpy", "bcompose", "ashift", "normalize"]
