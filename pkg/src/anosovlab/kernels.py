"""Kernel backend selection.

The compiled extension is preferred when present; the pure-Python
backend is used otherwise, or when ANOSOVLAB_PURE_KERNELS is set to a
non-empty value other than "0". `BACKEND` records which one is active.
"""

import os

if os.environ.get("ANOSOVLAB_PURE_KERNELS", "0") not in ("", "0"):
    from . import _kernels_py as _impl

    BACKEND = "pure"
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "pure"

weyl_product = _impl.weyl_product
combine_terms = _impl.combine_terms
birkhoff_sum = _impl.birkhoff_sum
