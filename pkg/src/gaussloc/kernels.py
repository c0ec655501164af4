"""Backend selection for the oracle scoring kernel.

The compiled extension is used when it imports; set ``GLE_PURE_PYTHON=1`` to
force the numpy fallback.
"""

import os

from ._kernels_py import ENTROPY, LOG_NEGATIVITY
from . import _kernels_py as python_backend

compiled_backend = None
if not os.environ.get("GLE_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

BACKEND = "cython" if compiled_backend is not None else "python"
score_single_mode = (compiled_backend or python_backend).score_single_mode

__all__ = ["BACKEND", "ENTROPY", "LOG_NEGATIVITY", "score_single_mode",
           "compiled_backend", "python_backend"]
