"""Select the compiled kernels when available, else the pure-Python ones.

Set ``GKM14_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("GKM14_PURE_PYTHON"):
    from ._kernels_py import conv_trunc, enum_coset, eta_power, sparse_mul_trunc
    BACKEND = "python"
else:
    try:
        from ._kernels import conv_trunc, enum_coset, eta_power, sparse_mul_trunc
        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._kernels_py import conv_trunc, enum_coset, eta_power, sparse_mul_trunc
        BACKEND = "python"

__all__ = ["BACKEND", "conv_trunc", "enum_coset", "eta_power", "sparse_mul_trunc"]
