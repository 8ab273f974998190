"""Backend selection for the GF(2^m) matrix kernels.

The compiled ``_speedups`` extension is used when it imports; otherwise the
numpy fallback in ``_pykernels``. Setting ``RBTCODE_PURE_PYTHON=1`` forces the
fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("RBTCODE_PURE_PYTHON"):
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _pykernels

SINGULAR_ERRORS = (_pykernels.SingularMatrixError, getattr(_impl, "SingularMatrixError", ValueError))


def backends():
    """Map of every importable backend name to its module."""
    found = {"python": _pykernels}
    try:
        from . import _speedups

        found["cython"] = _speedups
    except ImportError:  # pragma: no cover
        pass
    return found


def matmul(a, b, exp, log, order):
    return _impl.matmul(a, b, exp, log, order)


def rank(m, exp, log, order):
    return _impl.rank(m, exp, log, order)


def inverse(m, exp, log, order):
    return _impl.inverse(m, exp, log, order)
