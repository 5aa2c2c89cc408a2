"""Kernel backend selection.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``SNAKECR_PURE_PYTHON`` is set to a non-empty value,
the numpy fallback is used.  Both expose identical functions.
"""
from __future__ import annotations

import os

from . import _kernels_fallback as fallback

compiled = None
if not os.environ.get("SNAKECR_PURE_PYTHON"):
    try:
        from . import _kernels as compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled = None

backend = compiled if compiled is not None else fallback
BACKEND = "compiled" if compiled is not None else "numpy"

jet_mul = backend.jet_mul
trig_eval = backend.trig_eval
