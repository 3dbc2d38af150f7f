"""Kernel backend selection.

The compiled ``augdoe._ckernels`` extension is used when it was built;
otherwise the numpy kernels in :mod:`augdoe._pykernels`. Set
``AUGDOE_KERNELS=python`` to force the numpy path or ``AUGDOE_KERNELS=cython``
to fail loudly when the extension is missing.
"""

import os

from augdoe import _pykernels

_requested = os.environ.get("AUGDOE_KERNELS", "auto").lower()

if _requested == "python":
    _impl = _pykernels
else:
    try:
        from augdoe import _ckernels as _impl
    except ImportError:
        if _requested == "cython":
            raise
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"


def available_backends():
    """Map backend name to module for every backend that imports."""
    found = {"python": _pykernels}
    try:
        from augdoe import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found


warp_bilinear = _impl.warp_bilinear
convolve_separable = _impl.convolve_separable
canny_nms = _impl.canny_nms
hysteresis = _impl.hysteresis
clahe_interpolate = _impl.clahe_interpolate
reflect_index = _pykernels.reflect_index

_KERNEL_NAMES = ("warp_bilinear", "convolve_separable", "canny_nms", "hysteresis", "clahe_interpolate")


def use(name: str) -> str:
    """Rebind the kernel functions to backend ``name``; returns the previous backend."""
    global BACKEND
    backends = available_backends()
    if name not in backends:
        raise ImportError(f"kernel backend {name!r} is not available (have {sorted(backends)})")
    previous = BACKEND
    for fn in _KERNEL_NAMES:
        globals()[fn] = getattr(backends[name], fn)
    BACKEND = name
    return previous
