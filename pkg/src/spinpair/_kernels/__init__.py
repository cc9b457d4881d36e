"""Numerical kernels with a compiled fast path.

At import time the Cython extension is preferred; the pure-Python twin
is used when the extension is unavailable or when the environment
variable ``SPINPAIR_PURE_PYTHON=1`` forces the fallback.  Both expose
the same functions with identical numerical behavior.
"""

from __future__ import annotations

import os

if os.environ.get("SPINPAIR_PURE_PYTHON") == "1":
    from . import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from . import _cykernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _pykernels as _impl

        BACKEND = "python"

rk4_block_profiles = _impl.rk4_block_profiles
rk4_full_profiles = _impl.rk4_full_profiles
rk4_block_ic2 = _impl.rk4_block_ic2
jacobi_eigh4 = _impl.jacobi_eigh4

__all__ = [
    "BACKEND",
    "rk4_block_profiles",
    "rk4_full_profiles",
    "rk4_block_ic2",
    "jacobi_eigh4",
]
