"""Kernel backend selection.

Prefers the compiled extension (``msn._kernel._speed``) and falls back to
the pure-Python implementation.  Set ``MSN_KERNEL=pure`` to force the
fallback, e.g. for benchmarking or debugging.
"""

import os

if os.environ.get("MSN_KERNEL", "").lower() == "pure":
    from msn._kernel.pure import OPTIMAL, UNBOUNDED, bland_min, echelon_int, pivot

    BACKEND = "pure"
else:
    try:
        from msn._kernel._speed import OPTIMAL, UNBOUNDED, bland_min, echelon_int, pivot

        BACKEND = "compiled"
    except ImportError:
        from msn._kernel.pure import OPTIMAL, UNBOUNDED, bland_min, echelon_int, pivot

        BACKEND = "pure"

__all__ = ["BACKEND", "OPTIMAL", "UNBOUNDED", "bland_min", "echelon_int", "pivot"]
