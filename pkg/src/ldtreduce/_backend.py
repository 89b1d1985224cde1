"""Kernel backend selection.

The compiled extension is preferred when importable; set the environment
variable ``LDTREDUCE_PURE=1`` to force the pure-Python twin. Both expose
the same functions with identical semantics.
"""

from __future__ import annotations

import os

from . import _kernels_py as pure

__all__ = ["pure", "compiled", "active", "HAS_COMPILED", "USING_COMPILED"]

try:
    from . import _kernels as compiled  # type: ignore[no-redef]
except ImportError:
    compiled = None

HAS_COMPILED = compiled is not None
USING_COMPILED = HAS_COMPILED and os.environ.get("LDTREDUCE_PURE", "") != "1"
active = compiled if USING_COMPILED else pure
