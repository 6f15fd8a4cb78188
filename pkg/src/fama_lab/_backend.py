"""Select the compiled extension core or the numpy fallback at import.

``FAMA_LAB_BACKEND=compiled`` or ``=python`` forces a choice (the
benchmark and the cross-backend tests import both modules directly).
"""

from __future__ import annotations

import os

_forced = os.environ.get("FAMA_LAB_BACKEND")

if _forced == "python":
    from . import _kernels_py as kernels
elif _forced == "compiled":
    from . import _kernels as kernels  # type: ignore[no-redef]
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

BACKEND = kernels.BACKEND_NAME
