# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled steady-state batch kernel.

Hot loop of the Doppler average: for each scalar shift ``s`` solve the
trace-one steady state of ``L(s) = l_base + s * diag(diag_shift)`` with a
dense complex LU (partial pivoting) on the trace-row-replaced 16x16 system.
Mirrors ``reference.steady_batch`` exactly (status codes 0 ok, 1 singular,
2 residual too large).
"""

import numpy as np

cimport cython
from libc.math cimport fabs

BACKEND_NAME = "compiled"

cdef double RESIDUAL_TOL = 1e-10


cdef inline double _cmag(double complex z) noexcept nogil:
    # 1-norm style magnitude: cheap, monotone with |z|, pivot-safe.
    return fabs(z.real) + fabs(z.imag)


@cython.boundscheck(False)
@cython.wraparound(False)
def steady_batch(double complex[:, ::1] l_base not None,
                 double complex[::1] diag_shift not None,
                 double[::1] shifts not None):
    """Solve the shifted steady-state problem for every entry of ``shifts``."""
    if l_base.shape[0] != 16 or l_base.shape[1] != 16:
        raise ValueError("l_base must be 16x16")
    if diag_shift.shape[0] != 16:
        raise ValueError("diag_shift must have 16 entries")

    cdef Py_ssize_t n = shifts.shape[0]
    rho_np = np.zeros((n, 4, 4), dtype=complex)
    status_np = np.zeros(n, dtype=np.int32)
    cdef double complex[:, :, ::1] rho = rho_np
    cdef int[::1] status = status_np

    cdef double complex liou[16][16]
    cdef double complex work[16][16]
    cdef double complex x[16]
    cdef double complex acc, factor, tmp
    cdef double norm, mag, best, residual, trace
    cdef Py_ssize_t idx, i, j, col, piv, row

    with nogil:
        for idx in range(n):
            # L(s) and its max-magnitude norm
            norm = 0.0
            for i in range(16):
                for j in range(16):
                    tmp = l_base[i, j]
                    if i == j:
                        tmp = tmp + shifts[idx] * diag_shift[i]
                    liou[i][j] = tmp
                    mag = _cmag(tmp)
                    if mag > norm:
                        norm = mag

            # trace-row-replaced copy for the LU solve
            for i in range(16):
                for j in range(16):
                    work[i][j] = liou[i][j]
                x[i] = 0.0
            for j in range(16):
                work[15][j] = 0.0
            for j in range(0, 16, 5):
                work[15][j] = 1.0
            x[15] = 1.0

            # LU with partial pivoting, forward-eliminating the RHS in place
            status[idx] = 0
            for col in range(16):
                piv = col
                best = _cmag(work[col][col])
                for row in range(col + 1, 16):
                    mag = _cmag(work[row][col])
                    if mag > best:
                        best = mag
                        piv = row
                if best == 0.0:
                    status[idx] = 1
                    break
                if piv != col:
                    for j in range(col, 16):
                        tmp = work[col][j]
                        work[col][j] = work[piv][j]
                        work[piv][j] = tmp
                    tmp = x[col]
                    x[col] = x[piv]
                    x[piv] = tmp
                for row in range(col + 1, 16):
                    factor = work[row][col] / work[col][col]
                    if factor != 0:
                        for j in range(col + 1, 16):
                            work[row][j] = work[row][j] - factor * work[col][j]
                        x[row] = x[row] - factor * x[col]
                    work[row][col] = 0.0
            if status[idx] != 0:
                continue

            # back substitution
            for col in range(15, -1, -1):
                acc = x[col]
                for j in range(col + 1, 16):
                    acc = acc - work[col][j] * x[j]
                x[col] = acc / work[col][col]

            # residual against the unmodified generator
            residual = 0.0
            for i in range(16):
                acc = 0.0
                for j in range(16):
                    acc = acc + liou[i][j] * x[j]
                mag = _cmag(acc)
                if mag > residual:
                    residual = mag
            if residual > RESIDUAL_TOL * norm:
                status[idx] = 2
                continue

            # hermitize and renormalize the trace
            trace = 0.0
            for i in range(4):
                trace = trace + x[4 * i + i].real
            for i in range(4):
                for j in range(4):
                    rho[idx, i, j] = 0.5 * (x[4 * i + j] + x[4 * j + i].conjugate()) / trace

    return rho_np, status_np
