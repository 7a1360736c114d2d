"""Select the compiled kernels when available, else the pure-Python twins.

Set ``TREELIKE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py as python

compiled = None
if not os.environ.get("TREELIKE_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

active = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

bnb_min_inflections = active.bnb_min_inflections
count_fixed_ncpd = active.count_fixed_ncpd
segment_crossings = active.segment_crossings
