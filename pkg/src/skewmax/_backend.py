"""Selects the compiled kernels when available, else the numpy fallback.

Set ``SKEWMAX_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("SKEWMAX_PURE_PYTHON", "") not in ("", "0"):
    from . import _fallback as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        from . import _fallback as kernels

BACKEND = kernels.NAME
