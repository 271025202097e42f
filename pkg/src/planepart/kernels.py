"""Kernel selection.

The compiled extension is used when it was built; otherwise the pure-Python
implementation is loaded.  Setting ``PLANEPART_PURE_PYTHON=1`` forces the
fallback (used by the benchmark and by the backend-equivalence tests).
"""

import os

from . import _pykernels as python_backend

try:
    from . import _kernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and os.environ.get("PLANEPART_PURE_PYTHON", "") in ("", "0"):
    _active = compiled_backend
else:
    _active = python_backend

BACKEND = _active.BACKEND
sigma2_sieve = _active.sigma2_sieve
pl_extend = _active.pl_extend


def available_backends():
    """Return the kernel modules importable in this environment, compiled first."""
    out = []
    if compiled_backend is not None:
        out.append(compiled_backend)
    out.append(python_backend)
    return out
