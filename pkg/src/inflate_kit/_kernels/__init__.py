"""Hot loops: sparse integer elimination and section enumeration.

The compiled module ``_ckernels`` is used when it was built; otherwise the
pure-Python reference in ``_pykernels`` is loaded.  Set
``INFLATE_KIT_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("INFLATE_KIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled_backend = None

_active = compiled_backend or python_backend
BACKEND = "cython" if compiled_backend is not None and _active is compiled_backend else "python"



def _with_fallback(name):
    fast = getattr(_active, name)
    slow = getattr(python_backend, name)
    if fast is slow:
        return slow

    def run(*args, **kwargs):
        try:
            return fast(*args, **kwargs)
        except OverflowError:
            # 64-bit entries or bitmasks ran out; the reference is arbitrary precision
            return slow(*args, **kwargs)

    run.__name__ = name
    run.__doc__ = slow.__doc__
    return run


rank_and_torsion = _with_fallback("rank_and_torsion")
enumerate_sections = _with_fallback("enumerate_sections")
flabby_scan = _with_fallback("flabby_scan")
dense_invariant_factors = python_backend.dense_invariant_factors

__all__ = [
    "BACKEND",
    "compiled_backend",
    "python_backend",
    "rank_and_torsion",
    "enumerate_sections",
    "flabby_scan",
    "dense_invariant_factors",
]
