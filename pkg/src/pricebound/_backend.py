"""Kernel backend selection.

The compiled Cython extension is preferred; the NumPy fallback is used
when it is missing (source checkout without a build) or when the
``PRICEBOUND_BACKEND=python`` environment variable forces it.  Call
sites go through ``_backend.impl`` so tests and benchmarks can switch
backends with :func:`use`.
"""

import os

from . import _kernels_py

impl = _kernels_py

if os.environ.get("PRICEBOUND_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _compiled

        impl = _compiled
    except ImportError:
        pass


def backend_name() -> str:
    return impl.BACKEND_NAME


def available_backends():
    names = ["python"]
    try:
        from . import _kernels  # noqa: F401

        names.insert(0, "compiled")
    except ImportError:
        pass
    return names


def use(name: str):
    """Switch the active backend ("compiled" or "python"); returns the module."""
    global impl
    if name == "python":
        impl = _kernels_py
    elif name == "compiled":
        from . import _kernels as _compiled

        impl = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")
    return impl
