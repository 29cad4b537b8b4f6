"""Kernel backend selection.

The compiled kernel is preferred when the extension built; the pure
Python fallback computes bit-identical results, only slower. Set
QUATQUAD_KERNEL=python to force the fallback, or QUATQUAD_KERNEL=c to
require the compiled extension (import fails if it is unavailable).
"""

import os

__all__ = ["trace_block", "backend_name"]

_requested = os.environ.get("QUATQUAD_KERNEL", "auto").strip().lower() or "auto"

if _requested == "auto":
    try:
        from ._core import trace_block
        _backend = "compiled"
    except ImportError:
        from ._fallback import trace_block
        _backend = "python"
elif _requested in ("python", "fallback"):
    from ._fallback import trace_block
    _backend = "python"
elif _requested in ("c", "compiled", "cython"):
    from ._core import trace_block
    _backend = "compiled"
else:
    raise ImportError(
        f"unknown QUATQUAD_KERNEL value {_requested!r}; "
        "use 'auto', 'python', or 'c'")


def backend_name() -> str:
    """Which kernel implementation is active: 'compiled' or 'python'."""
    return _backend
