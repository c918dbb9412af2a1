"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the pure
fallback is always available.  Set ``FRAUDLEX_PURE=1`` to force the
fallback (used by the benchmark and the backend-equivalence tests).
"""

from __future__ import annotations

import os

from fraudlex._kernels import pure as _pure

try:
    from fraudlex._kernels import _native as _native  # type: ignore[attr-defined]
except ImportError:
    _native = None

if _native is not None and os.environ.get("FRAUDLEX_PURE", "0") in ("", "0"):
    _impl = _native
else:
    _impl = _pure

BACKEND = _impl.BACKEND_NAME
count_category = _impl.count_category
dual_cd = _impl.dual_cd


def available_backends() -> tuple[str, ...]:
    return ("pure", "native") if _native is not None else ("pure",)


def get_backend(name: str):
    """Return a specific backend module; raises if it is not available."""
    if name == "pure":
        return _pure
    if name == "native" and _native is not None:
        return _native
    raise ValueError(f"backend not available: {name}")
