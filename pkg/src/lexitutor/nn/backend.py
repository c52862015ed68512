"""Selects the recurrence kernel implementation at import time.

The compiled Cython kernel is used when it has been built and the arrays are
float32; everything else goes through the numpy fallback. Set
``LEXITUTOR_BACKEND`` to ``numpy`` or ``cython`` to force a choice (``cython``
raises if the extension is missing). Each backend is individually
deterministic; across backends results agree to float32 rounding, not bit
for bit.
"""

from __future__ import annotations

import os

import numpy as np

from ..errors import InvalidConfig
from . import kernels_numpy

try:
    from . import _lstm_kernel as _compiled
except ImportError:
    _compiled = None


def _choose() -> str:
    requested = os.environ.get("LEXITUTOR_BACKEND", "auto").lower()
    if requested not in ("auto", "numpy", "cython"):
        raise InvalidConfig(f"LEXITUTOR_BACKEND must be auto|numpy|cython, got {requested!r}")
    if requested == "cython" and _compiled is None:
        raise InvalidConfig("LEXITUTOR_BACKEND=cython but the compiled kernel is not built")
    if requested == "auto":
        return "cython" if _compiled is not None else "numpy"
    return requested


_ACTIVE = _choose()


def active_backend() -> str:
    """Name of the kernel backend in use: 'cython' or 'numpy'."""
    return _ACTIVE


def compiled_available() -> bool:
    return _compiled is not None


def kernels_for(dtype) -> object:
    """Module providing lstm_forward/lstm_backward for arrays of this dtype."""
    if _ACTIVE == "cython" and dtype == np.float32:
        return _compiled
    return kernels_numpy
