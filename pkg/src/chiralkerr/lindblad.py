"""Liouvillian assembly and steady-state solution of the master equation.

Density matrices are vectorized row-major (C order), so rho[i, j] lives at
vec index 4*i + j and the generator reads

    L = -i (H (x) I - I (x) H^T) + sum_k [ C_k (x) conj(C_k)
        - 1/2 (C_k^+ C_k (x) I + I (x) (C_k^+ C_k)^T) ]

with (x) the Kronecker product. The steady state is obtained by replacing
one row of L with the trace condition and solving the square system; an SVD
null-space extraction serves as the self-diagnosing fallback.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .atom import DIM, AtomParams
from .errors import DegenerateSteadyStateError, NumericalError, ValidationError

_N2 = DIM * DIM
_IDENT = np.eye(DIM, dtype=complex)

#: Row vector representing Tr(.) on row-major vectorized density matrices.
TRACE_ROW = np.zeros(_N2, dtype=complex)
TRACE_ROW[:: DIM + 1] = 1.0

_HERMITICITY_TOL = 1e-12
_TRACE_PRESERVATION_TOL = 1e-10
_RESIDUAL_TOL = 1e-10
_CONDITION_LIMIT = 1e12
_NULLSPACE_GAP = 1e-9
_EIG_FLOOR = -1e-9


@dataclass(frozen=True)
class DensityMatrix:
    """A 4x4 density matrix with trace/Hermiticity/positivity invariants."""

    matrix: np.ndarray

    def validate(self, trace_tol: float = 1e-12, herm_tol: float = 1e-12,
                 eig_floor: float = _EIG_FLOOR) -> "DensityMatrix":
        """Check all invariants, returning self; raises ValidationError on failure."""
        m = self.matrix
        if m.shape != (DIM, DIM):
            raise ValidationError(f"density matrix must be {DIM}x{DIM}, got {m.shape}")
        if abs(np.trace(m) - 1.0) > trace_tol:
            raise ValidationError(f"density matrix trace {np.trace(m)} deviates from 1")
        if np.abs(m - m.conj().T).max() > herm_tol:
            raise ValidationError("density matrix is not Hermitian within tolerance")
        lowest = scipy.linalg.eigvalsh(m)[0]
        if lowest < eig_floor:
            raise ValidationError(f"density matrix smallest eigenvalue {lowest} below {eig_floor}")
        return self

    def vec(self) -> np.ndarray:
        return self.matrix.reshape(_N2)


@dataclass(frozen=True)
class DissipatorSet:
    """Collapse operators (rates folded in as sqrt(rate)) plus their rate labels."""

    operators: tuple
    rates: dict

    @classmethod
    def from_atom(cls, atom: AtomParams) -> "DissipatorSet":
        """The six decoherence channels of the four-level vapor.

        Spontaneous decay |2> -> |1>, |3> and |4> -> |1>, |3>; pure dephasing
        between the grounds (rho_13 decays at gamma31 without population
        transfer); and symmetric transit exchange |1> <-> |3| at
        gamma_transit / 2 each way.
        """
        def ketbra(i, j):
            op = np.zeros((DIM, DIM), dtype=complex)
            op[i, j] = 1.0
            return op

        ops = [
            np.sqrt(atom.gamma21) * ketbra(0, 1),
            np.sqrt(atom.gamma23) * ketbra(2, 1),
            np.sqrt(atom.gamma41) * ketbra(0, 3),
            np.sqrt(atom.gamma43) * ketbra(2, 3),
            np.sqrt(atom.gamma31 / 2.0) * (ketbra(0, 0) - ketbra(2, 2)),
            np.sqrt(atom.gamma_transit / 2.0) * ketbra(0, 2),
            np.sqrt(atom.gamma_transit / 2.0) * ketbra(2, 0),
        ]
        rates = {
            "gamma21": atom.gamma21,
            "gamma23": atom.gamma23,
            "gamma41": atom.gamma41,
            "gamma43": atom.gamma43,
            "gamma31": atom.gamma31,
            "gamma_transit": atom.gamma_transit,
        }
        return cls(operators=tuple(ops), rates=rates)


def build_liouvillian(h: np.ndarray, d: DissipatorSet) -> np.ndarray:
    """Assemble the 16x16 generator for Hamiltonian ``h`` and dissipators ``d``.

    ``h`` must be Hermitian within 1e-12 of its largest element; the returned
    matrix is checked to left-annihilate the trace row.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (DIM, DIM):
        raise ValidationError(f"hamiltonian must be {DIM}x{DIM}, got {h.shape}")
    scale = max(np.abs(h).max(), 1.0)
    if np.abs(h - h.conj().T).max() > _HERMITICITY_TOL * scale:
        raise ValidationError("hamiltonian is not Hermitian within tolerance")

    liou = -1j * (np.kron(h, _IDENT) - np.kron(_IDENT, h.T))
    for c in d.operators:
        cdc = c.conj().T @ c
        liou += np.kron(c, c.conj())
        liou -= 0.5 * (np.kron(cdc, _IDENT) + np.kron(_IDENT, cdc.T))

    norm = np.abs(liou).max()
    if norm > 0 and np.abs(TRACE_ROW @ liou).max() > _TRACE_PRESERVATION_TOL * norm:
        raise NumericalError("assembled Liouvillian is not trace-preserving")
    return liou


def _nullspace_state(liou: np.ndarray, context: str | None) -> np.ndarray:
    """SVD fallback: extract the steady state, diagnosing degeneracy."""
    _, s, vh = np.linalg.svd(liou)
    small = int(np.sum(s <= _NULLSPACE_GAP * s[0]))
    if small != 1:
        detail = f" ({context})" if context else ""
        raise DegenerateSteadyStateError(
            f"Liouvillian null space is {small}-dimensional (expected 1); smallest "
            f"singular values {s[-2]:.3e}, {s[-1]:.3e} vs largest {s[0]:.3e}{detail}"
        )
    return vh[-1].conj()


def steady_state(liou: np.ndarray, context: dict | None = None) -> DensityMatrix:
    """Unique trace-one steady state of the Liouvillian.

    Solves the trace-row-replaced square system; falls back to SVD null-space
    extraction when the system is ill-conditioned or the residual check
    fails. ``context`` (e.g. ``DissipatorSet.rates``) enriches the error
    message raised when the steady state is degenerate.
    """
    liou = np.asarray(liou, dtype=complex)
    if liou.shape != (_N2, _N2):
        raise ValidationError(f"liouvillian must be {_N2}x{_N2}, got {liou.shape}")
    ctx = None
    if context:
        zeros = [k for k, r in context.items() if r == 0]
        ctx = "rates: " + ", ".join(f"{k}={v:.6g}" for k, v in context.items())
        if zeros:
            ctx += "; zero rates: " + ", ".join(zeros)

    norm = np.abs(liou).max()
    if norm == 0.0:
        raise DegenerateSteadyStateError(
            "Liouvillian is identically zero; every state is stationary"
            + (f" ({ctx})" if ctx else "")
        )

    reduced = liou.copy()
    reduced[-1, :] = TRACE_ROW
    rhs = np.zeros(_N2, dtype=complex)
    rhs[-1] = 1.0

    vec = None
    try:
        if np.linalg.cond(reduced) <= _CONDITION_LIMIT:
            vec = np.linalg.solve(reduced, rhs)
    except np.linalg.LinAlgError:
        vec = None
    if vec is not None:
        residual = np.abs(liou @ vec).max()
        if not np.isfinite(residual) or residual > _RESIDUAL_TOL * norm:
            vec = None
    if vec is None:
        vec = _nullspace_state(liou, ctx)

    rho = vec.reshape(DIM, DIM)
    rho = 0.5 * (rho + rho.conj().T)
    trace = np.trace(rho).real
    if abs(trace) < 1e-300:
        raise NumericalError("steady-state trace vanished; cannot normalize")
    rho = rho / trace

    residual = np.abs(liou @ rho.reshape(_N2)).max()
    if residual > _RESIDUAL_TOL * norm:
        raise NumericalError(
            f"steady-state residual {residual:.3e} exceeds {_RESIDUAL_TOL:.1e} * |L| = "
            f"{_RESIDUAL_TOL * norm:.3e}" + (f" ({ctx})" if ctx else "")
        )
    out = DensityMatrix(rho)
    out.validate()
    return out


def evolve(rho0: DensityMatrix, liou: np.ndarray, t: float) -> DensityMatrix:
    """Propagate ``rho0`` for time ``t`` (s) under exp(L t); testing oracle."""
    if t < 0:
        raise ValidationError("evolution time must be >= 0")
    vec = scipy.linalg.expm(np.asarray(liou, dtype=complex) * t) @ rho0.vec()
    rho = vec.reshape(DIM, DIM)
    trace = np.trace(rho)
    if abs(trace - 1.0) > 1e-10:
        raise NumericalError(f"propagation lost trace: Tr rho = {trace}")
    return DensityMatrix(0.5 * (rho + rho.conj().T))
