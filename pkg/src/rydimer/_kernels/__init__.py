"""Propagation kernel selection: compiled core with a pure-numpy fallback.

The compiled Cython extension is preferred when it built successfully;
``RYDIMER_PURE=1`` in the environment forces the numpy fallback (used by
the kernel benchmark and as an escape hatch on platforms without a C
compiler).  Both backends implement the identical ``propagate_rk4``
contract and are cross-checked in the test suite.
"""

import os

if os.environ.get("RYDIMER_PURE", "") not in ("", "0"):
    from ._pure import BACKEND, propagate_rk4
else:
    try:
        from ._core import BACKEND, propagate_rk4
    except ImportError:
        from ._pure import BACKEND, propagate_rk4

__all__ = ["propagate_rk4", "BACKEND"]
