"""Backend selection for the hot loops.

The compiled extension is used when it imports; set ``ISORES_BACKEND=python``
to force the numpy fallback (the benchmark and the fallback tests do this).
"""
import os

from . import _fallback

BACKEND = "python"
if os.environ.get("ISORES_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _fallback
else:
    _impl = _fallback

sturm_count = _impl.sturm_count
bisect_eigenvalues = _impl.bisect_eigenvalues
jacobi_singular_values = _impl.jacobi_singular_values

__all__ = ["BACKEND", "sturm_count", "bisect_eigenvalues", "jacobi_singular_values"]
