"""Backend selection for the enumeration hot loops.

The compiled extension ``_ckernels`` is used when it was built; otherwise the
pure-Python ``_pykernels`` is used. Setting ``SYSCOW_PURE=1`` in the
environment forces the fallback. ``BACKEND`` names the active one.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("SYSCOW_PURE", "") == "1":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _pykernels
        BACKEND = "python"

enumerate_ball = _impl.enumerate_ball
min_cost_nonzero = _impl.min_cost_nonzero

__all__ = ["BACKEND", "enumerate_ball", "min_cost_nonzero"]
