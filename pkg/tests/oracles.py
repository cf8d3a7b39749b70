"""Independent closed-form oracles used by the test suite.

These are derived by hand from the optical Bloch equations of the level
scheme and do not share any code path with the solver they check: the
two-level form solves the population balance of the probed transition plus
the ground-exchange reservoir exactly; the three-level form is exact to
first order in the probe, with the exact zeroth-order populations and the
coupling coherence of the driven subsystem included.
"""

import numpy as np

from chiralkerr import AtomParams


def two_level_rho23(omega_p: float, delta_p: float, atom: AtomParams) -> complex:
    """Exact steady-state rho23 with only the probe driving |3> <-> |2>.

    Includes probe-induced depletion of |3> against the transit exchange, so
    it holds at any probe strength (not just the weak-probe limit).
    """
    g2 = atom.gamma21 + atom.gamma23
    gt = atom.gamma_transit
    gtil = g2 / 2 + atom.gamma31 / 4 + gt / 4
    # excited population per unit (p3 - p2) from the coherence drive
    s = (omega_p ** 2 / 2) * gtil / (gtil ** 2 + delta_p ** 2) / g2
    sigma = s / (1 + s)
    p3 = 1.0 / (2.0 + sigma * (1.0 + 2.0 * atom.gamma21 / gt))
    return 1j * (omega_p / 2) * p3 * (1 - sigma) / (gtil + 1j * delta_p)


def lambda_eit_rho23(omega_p: float, omega_c: float, delta_p: float, delta_c: float,
                     atom: AtomParams) -> complex:
    """Three-level (coupling + weak probe) steady-state rho23, first order in probe.

    Zeroth order: the coupling-driven |1> <-> |2> subsystem with decay into
    |3> and transit exchange, solved exactly. First order: the coupled
    (rho23, rho13) linear pair including the zeroth-order coupling coherence
    source term.
    """
    g2 = atom.gamma21 + atom.gamma23
    gt = atom.gamma_transit
    g12 = g2 / 2 + atom.gamma31 / 4 + gt / 4
    g23 = g2 / 2 + atom.gamma31 / 4 + gt / 4
    g13 = atom.gamma31 + gt / 2

    sc = (omega_c ** 2 / 2) * g12 / (g12 ** 2 + delta_c ** 2) / g2
    sig = sc / (1 + sc)
    p1 = 1.0 / (2.0 + sig * (1.0 + 2.0 * atom.gamma23 / gt))
    p2 = sig * p1
    p3 = p1 * (1.0 + (2.0 * atom.gamma23 / gt) * sig)
    rho12 = 1j * (omega_c / 2) * (p2 - p1) / (g12 - 1j * delta_c)

    a = np.array(
        [[g23 + 1j * delta_p, -1j * omega_c / 2],
         [-1j * omega_c / 2, g13 + 1j * (delta_p - delta_c)]],
        dtype=complex,
    )
    b = np.array([1j * (omega_p / 2) * (p3 - p2), -1j * (omega_p / 2) * rho12], dtype=complex)
    return complex(np.linalg.solve(a, b)[0])


def chi_from_rho23(rho23: complex, atom: AtomParams, omega_p: float,
                   hbar: float, eps0: float) -> complex:
    """Susceptibility normalization shared with the package definition."""
    return 2.0 * atom.density_n0 * atom.mu23 ** 2 * rho23 / (hbar * eps0 * omega_p)


def hilbert_reconstruct_real(detunings: np.ndarray, im_chi: np.ndarray) -> np.ndarray:
    """Kramers-Kronig reconstruction of Re chi from Im chi on a uniform grid.

    Principal-value trapezoid sum skipping the singular node; the sign is
    fixed by the package's detuning convention (checked against the analytic
    two-level lineshape in the tests).
    """
    d = np.asarray(detunings, dtype=float)
    h = d[1] - d[0]
    re = np.empty_like(im_chi, dtype=float)
    for i in range(d.size):
        dm = d - d[i]
        dm[i] = 1.0  # excluded below
        integrand = im_chi / dm
        integrand[i] = 0.0
        re[i] = -(h / np.pi) * integrand.sum()
    return re
