"""Hot-kernel dispatch: compiled extension when available, numpy otherwise.

Set ``SLAVESPIN_KERNEL=py`` (or ``c``) to force a backend; the default
prefers the compiled core and falls back silently to the numpy
implementation, which is functionally identical but slower on large
clusters.  ``KERNEL_BACKEND`` records which one is active.
"""

import os

_choice = os.environ.get("SLAVESPIN_KERNEL", "").strip().lower()

if _choice in ("py", "numpy", "python"):
    from ._numpy import BACKEND as KERNEL_BACKEND
    from ._numpy import apply_diag_flips
elif _choice in ("c", "cython", "ext"):
    from ._core import BACKEND as KERNEL_BACKEND  # hard import: fail loudly if forced
    from ._core import apply_diag_flips
else:
    try:
        from ._core import BACKEND as KERNEL_BACKEND
        from ._core import apply_diag_flips
    except ImportError:
        from ._numpy import BACKEND as KERNEL_BACKEND
        from ._numpy import apply_diag_flips

__all__ = ["apply_diag_flips", "KERNEL_BACKEND"]
