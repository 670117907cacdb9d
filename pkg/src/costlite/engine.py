"""Backend selection for the search kernel.

The compiled ``_core`` extension is used when it imports; otherwise the
pure-Python port in ``_engine_py`` takes over.  ``COSTLITE_PURE=1`` forces the
fallback.  Weight totals beyond 62 bits always use the fallback, which works with
Python integers.
"""

from __future__ import annotations

import os

from . import _engine_py

try:  # pragma: no cover - depends on the build
    if os.environ.get("COSTLITE_PURE") == "1":
        raise ImportError("fallback forced")
    from . import _core
except ImportError:  # pragma: no cover
    _core = None

INT64_LIMIT = 1 << 62

BACKEND = "cython" if _core is not None else "python"


def make_search(nvars, clauses, weights, backend=None):
    """A search object over ``clauses`` (weight -1 marks a hard clause)."""
    use = backend or BACKEND
    if use not in ("cython", "python"):
        raise ValueError(f"unknown backend {use!r}")
    big = sum(w for w in weights if w > 0) >= INT64_LIMIT
    if use == "cython" and _core is not None and not big:
        return _core.Search(nvars, clauses, weights)
    return _engine_py.Search(nvars, clauses, weights)


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _core is not None else [])
