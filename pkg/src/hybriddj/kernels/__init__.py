"""Hot numerical kernels with a compiled backend and a pure-Python fallback.

The Cython extension is used when it was built; set ``HYBRIDDJ_PURE_PYTHON=1``
to force the fallback. ``BACKEND`` names the active implementation.
"""

import os

from . import _tintegral_py as python_backend

compiled_backend = None
if os.environ.get("HYBRIDDJ_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _tintegral as compiled_backend
    except ImportError:
        compiled_backend = None

_active = compiled_backend or python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

t_integral = _active.t_integral
t_integral_many = _active.t_integral_many


def available_backends():
    """Mapping of backend name to module, compiled first when present."""
    out = {}
    if compiled_backend is not None:
        out["cython"] = compiled_backend
    out["python"] = python_backend
    return out
