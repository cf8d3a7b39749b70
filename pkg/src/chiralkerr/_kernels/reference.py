"""Pure-NumPy steady-state batch kernel (fallback backend).

Same contract as the compiled kernel in ``_steady_cy.pyx``: for each scalar
shift ``s`` solve the trace-one steady state of

    L(s) = l_base + s * diag(diag_shift)

and return the (hermitized, trace-normalized) density matrices together with
a per-node status (0 ok, 1 singular system, 2 residual too large).
"""

import numpy as np

BACKEND_NAME = "python"

_N = 4
_N2 = 16
_RESIDUAL_TOL = 1e-10
_DIAG = np.arange(_N2)
_TRACE_COLS = np.arange(0, _N2, _N + 1)


def steady_batch(l_base: np.ndarray, diag_shift: np.ndarray, shifts: np.ndarray):
    """Solve the shifted steady-state problem for every entry of ``shifts``."""
    l_base = np.ascontiguousarray(l_base, dtype=complex)
    diag_shift = np.ascontiguousarray(diag_shift, dtype=complex)
    shifts = np.ascontiguousarray(shifts, dtype=float)
    n = shifts.shape[0]
    rho_out = np.zeros((n, _N, _N), dtype=complex)
    status = np.zeros(n, dtype=np.int32)

    rhs = np.zeros(_N2, dtype=complex)
    rhs[-1] = 1.0

    for i in range(n):
        liou = l_base.copy()
        liou[_DIAG, _DIAG] += shifts[i] * diag_shift
        norm = np.abs(liou).max()
        reduced = liou.copy()
        reduced[-1, :] = 0.0
        reduced[-1, _TRACE_COLS] = 1.0
        try:
            vec = np.linalg.solve(reduced, rhs)
        except np.linalg.LinAlgError:
            status[i] = 1
            continue
        if not np.all(np.isfinite(vec)):
            status[i] = 1
            continue
        residual = np.abs(liou @ vec).max()
        if residual > _RESIDUAL_TOL * norm:
            status[i] = 2
            continue
        rho = vec.reshape(_N, _N)
        rho = 0.5 * (rho + rho.conj().T)
        rho_out[i] = rho / np.trace(rho).real

    return rho_out, status
