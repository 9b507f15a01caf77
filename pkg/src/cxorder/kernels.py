"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the pure-Python
implementation takes over. Setting ``CXORDER_PURE_PYTHON=1`` forces the
fallback.
"""
import os

import numpy as np

from . import _pykernels

_FORCE_PY = os.environ.get("CXORDER_PURE_PYTHON", "").strip() not in ("", "0")

try:
    if _FORCE_PY:
        raise ImportError("pure-Python backend requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"
_impl = _ckernels if _ckernels is not None else _pykernels


def available_backends():
    return ("cython", "python") if _ckernels is not None else ("python",)


def get_backend(name=None):
    """Kernel module by name; ``None`` selects the active backend."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def series_sum(ch, cl, w, rel_tol=1e-16, patience=3, backend=None):
    w = np.ascontiguousarray(np.atleast_1d(w), dtype=np.complex128)
    ch = np.ascontiguousarray(ch, dtype=np.complex128)
    cl = np.ascontiguousarray(cl, dtype=np.complex128)
    return get_backend(backend).series_sum(ch, cl, w, float(rel_tol), int(patience))


def rk4_power_law(order, damping, stiffness, forcing, y0, dy0, t0, h, n_steps, stride,
                  backend=None):
    """Run the RK4 kernel; each coefficient argument is ``(coefs, exponents)``."""
    def arr(x):
        return np.ascontiguousarray(x, dtype=np.complex128)

    return get_backend(backend).rk4_power_law(
        int(order), arr(damping[0]), arr(damping[1]), arr(stiffness[0]), arr(stiffness[1]),
        arr(forcing[0]), arr(forcing[1]), complex(y0), complex(dy0), float(t0), float(h),
        int(n_steps), int(stride))
