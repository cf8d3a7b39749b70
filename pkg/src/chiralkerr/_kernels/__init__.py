"""Backend selection for the steady-state batch kernel.

The compiled Cython kernel is preferred when its extension module built;
otherwise (or when ``CHIRALKERR_PURE_PYTHON=1`` is set) the NumPy fallback
is used. Both expose the same ``steady_batch`` contract and are compared by
``benchmarks/bench_backends.py`` and the backend-equivalence tests.
"""

import os

from . import reference

if os.environ.get("CHIRALKERR_PURE_PYTHON") == "1":
    _impl = reference
else:
    try:
        from . import _steady_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = reference

steady_batch = _impl.steady_batch
BACKEND_NAME = _impl.BACKEND_NAME


def available_backends() -> dict:
    """Map of backend name to steady_batch implementation (for benchmarks/tests)."""
    out = {reference.BACKEND_NAME: reference.steady_batch}
    try:
        from . import _steady_cy

        out[_steady_cy.BACKEND_NAME] = _steady_cy.steady_batch
    except ImportError:
        pass
    return out
