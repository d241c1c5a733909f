"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Both implementations run the same scaled-integer algorithms. The compiled
path uses C long long arithmetic, so the dispatcher routes an input to it
only when a conservative magnitude bound rules out overflow; the pure path
uses Python integers and has no such limit. Set COREMATCH_PURE=1 to force
the pure path.
"""

from __future__ import annotations

import os

from . import _kernels_py

SENTINEL = _kernels_py.SENTINEL

try:
    from . import _speedups as _compiled
except ImportError:  # pragma: no cover - build dependent
    _compiled = None

_FORCE_PURE = os.environ.get("COREMATCH_PURE") == "1"

#: Largest intermediate magnitude the compiled kernels may produce.
_LONG_LONG_SAFE = 1 << 60


def implementation() -> str:
    """Which kernel implementation is active: 'compiled' or 'pure'."""
    return "compiled" if (_compiled is not None and not _FORCE_PURE) else "pure"


def _fits_long_long(max_abs: int, n: int) -> bool:
    return (max_abs + 1) * (n + 2) < _LONG_LONG_SAFE


def scan_orders(perms, n, diag, lower, upper, collect_rows):
    max_abs = max(
        (abs(v) for row in (diag, *lower, *upper) for v in row if v != SENTINEL),
        default=0,
    )
    use_compiled = (
        _compiled is not None and not _FORCE_PURE and _fits_long_long(max_abs, n)
    )
    impl = _compiled if use_compiled else _kernels_py
    return impl.scan_orders(perms, n, diag, lower, upper, collect_rows)


def vertex_solutions(n, rows):
    max_abs = max((abs(c) for _, _, c in rows), default=0)
    use_compiled = (
        _compiled is not None and not _FORCE_PURE and _fits_long_long(max_abs, n)
    )
    impl = _compiled if use_compiled else _kernels_py
    return impl.vertex_solutions(n, rows)
