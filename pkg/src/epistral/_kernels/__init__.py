"""Kernel backend selection.

Two interchangeable implementations of the hot loops exist: a compiled
Cython extension (_native) and a pure-Python fallback (_py). The active one
is chosen at import time from the EPISTRAL_KERNELS environment variable:

    auto    use the compiled extension if importable, else the fallback
    native  require the compiled extension, raise if missing
    py      force the pure-Python fallback

Both expose greedy_select() and leader_cluster() with identical semantics.
"""

from __future__ import annotations

import os

from . import _py


def load_backend(name: str = "auto"):
    """Return (module, backend_name) for the requested backend."""
    if name not in ("auto", "native", "py"):
        raise ValueError(f"unknown kernel backend {name!r}")
    if name == "py":
        return _py, "py"
    try:
        from . import _native
    except ImportError:
        if name == "native":
            raise ImportError(
                "compiled kernels requested via EPISTRAL_KERNELS=native "
                "but the extension is not built"
            )
        return _py, "py"
    return _native, "native"


_impl, BACKEND = load_backend(os.environ.get("EPISTRAL_KERNELS", "auto"))

greedy_select = _impl.greedy_select
leader_cluster = _impl.leader_cluster
