"""Hot numeric kernels with a compiled core and a pure-Python fallback.

The compiled extension ``_core`` (Cython) is used when it was built; otherwise
the numpy implementation in ``pyref`` takes over.  ``BACKEND`` records which
one is active.  Set ``GALERKIN_TIME_KERNELS=python`` to force the fallback or
``GALERKIN_TIME_KERNELS=cython`` to require the extension.
"""

import os

from . import pyref

_requested = os.environ.get("GALERKIN_TIME_KERNELS", "auto").strip().lower()

if _requested in ("auto", "", "cython", "compiled"):
    try:
        from . import _core as _impl

        BACKEND = "cython"
    except ImportError:
        if _requested in ("cython", "compiled"):
            raise ImportError(
                "GALERKIN_TIME_KERNELS requested the compiled kernels but the "
                "extension galerkin_time._kernels._core is not built"
            )
        _impl = pyref
        BACKEND = "python"
elif _requested in ("python", "pure"):
    _impl = pyref
    BACKEND = "python"
else:
    raise ImportError(
        f"unknown GALERKIN_TIME_KERNELS value {_requested!r}; "
        "expected 'auto', 'cython', or 'python'"
    )

legendre_table = _impl.legendre_table
legendre_deriv_table = _impl.legendre_deriv_table
legendre_series = _impl.legendre_series
gauss_nodes_weights = _impl.gauss_nodes_weights


def available_backends():
    """Names of importable backends, compiled one first when present."""
    names = []
    try:
        from . import _core  # noqa: F401

        names.append("cython")
    except ImportError:
        pass
    names.append("python")
    return names


def get_backend(name):
    """Return the backend module for 'cython' or 'python' (for benchmarks)."""
    if name == "python":
        return pyref
    if name == "cython":
        from . import _core

        return _core
    raise ValueError(f"unknown backend {name!r}")
