"""Backend selection for the hot kernels.

The compiled extension is used when it imports; set ``EULERMAXWELL_PURE_PYTHON=1``
to force the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if not os.environ.get("EULERMAXWELL_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

llf_fluxes = _impl.llf_fluxes
thomas = _impl.thomas


def backend_name() -> str:
    return BACKEND
