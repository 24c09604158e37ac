"""Backend selection for the census and closure kernels."""

from __future__ import annotations

import os

from . import _kernels_py

try:
    if os.environ.get("CHAINSD_PURE_PYTHON"):
        raise ImportError("compiled kernels disabled by CHAINSD_PURE_PYTHON")
    from . import _census as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

census = _compiled.census if _compiled is not None else _kernels_py.census
closure = _compiled.closure if _compiled is not None else _kernels_py.closure
