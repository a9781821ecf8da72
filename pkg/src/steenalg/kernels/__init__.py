"""Hot kernels with a compiled backend and a pure-Python fallback.

The compiled module ``_ckernels`` (Cython) is used when importable. Setting
the environment variable ``STEENALG_KERNELS=python`` forces the fallback.
``BACKEND`` names the backend actually in use.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("STEENALG_KERNELS", "").lower() != "python":
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

if compiled_backend is not None:
    binom_mod_p = compiled_backend.binom_mod_p
    rref_mod_p = compiled_backend.rref_mod_p
    BACKEND = "cython"
else:
    binom_mod_p = python_backend.binom_mod_p
    rref_mod_p = python_backend.rref_mod_p
    BACKEND = "python"

__all__ = ["BACKEND", "binom_mod_p", "rref_mod_p", "python_backend", "compiled_backend"]
