"""Kernel selection: compiled extension if built, pure Python otherwise.

Set PETRIKIT_PURE=1 to force the pure fallback (used by the benchmark
and by tests that compare the two implementations).
"""

from __future__ import annotations

import os

from . import _core_py

if os.environ.get("PETRIKIT_PURE"):
    _impl = _core_py
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _core_py

explore = _impl.explore
linear_extensions = _impl.linear_extensions


def backend() -> str:
    """'compiled' when the C extension is active, else 'pure'."""
    return "pure" if _impl is _core_py else "compiled"
