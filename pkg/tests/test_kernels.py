"""Backend equivalence: compiled Cython kernel vs NumPy fallback."""

import numpy as np
import pytest

from chiralkerr import DissipatorSet, build_hamiltonian, build_liouvillian, steady_state
from chiralkerr._kernels import available_backends, reference
from chiralkerr.doppler import _diag_shift_coefficients
from conftest import TWO_PI_MHZ, make_drives

BACKENDS = available_backends()

needs_compiled = pytest.mark.skipif(
    "compiled" not in BACKENDS, reason="compiled kernel not built")


def _problem(atom, seed=3):
    rng = np.random.default_rng(seed)
    cfg = make_drives(rabi_p=0.4 * TWO_PI_MHZ, rabi_c=30 * TWO_PI_MHZ,
                      rabi_s=50 * TWO_PI_MHZ, delta_c=5 * TWO_PI_MHZ,
                      delta_s=200 * TWO_PI_MHZ, dir_s=-1)
    l_base = np.ascontiguousarray(
        build_liouvillian(build_hamiltonian(cfg), DissipatorSet.from_atom(atom)))
    coeff = np.ascontiguousarray(_diag_shift_coefficients(cfg))
    vels = np.ascontiguousarray(rng.uniform(-800, 800, 96))
    return cfg, l_base, coeff, vels


@needs_compiled
def test_backends_agree(atom):
    _, l_base, coeff, vels = _problem(atom)
    rho_c, st_c = BACKENDS["compiled"](l_base, coeff, vels)
    rho_p, st_p = BACKENDS["python"](l_base, coeff, vels)
    np.testing.assert_array_equal(st_c, st_p)
    assert np.all(st_c == 0)
    assert np.abs(rho_c - rho_p).max() < 1e-12


def test_reference_matches_robust_solver(atom):
    cfg, l_base, coeff, _ = _problem(atom)
    vels = np.array([-312.0, 0.0, 77.5])
    rho, status = reference.steady_batch(l_base, coeff, vels)
    assert np.all(status == 0)
    from chiralkerr import doppler_shifted
    for i, v in enumerate(vels):
        shifted = doppler_shifted(cfg, float(v))
        expected = steady_state(
            build_liouvillian(build_hamiltonian(shifted), DissipatorSet.from_atom(atom)))
        assert np.abs(rho[i] - expected.matrix).max() < 1e-11


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_singular_system_reports_status(name):
    zeros = np.zeros((16, 16), dtype=complex)
    coeff = np.zeros(16, dtype=complex)
    rho, status = BACKENDS[name](np.ascontiguousarray(zeros), coeff, np.array([0.0]))
    assert status[0] != 0


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_batch_density_matrix_properties(name, atom):
    _, l_base, coeff, vels = _problem(atom, seed=11)
    rho, status = BACKENDS[name](l_base, coeff, vels)
    assert np.all(status == 0)
    traces = np.trace(rho, axis1=1, axis2=2)
    np.testing.assert_allclose(traces, 1.0, rtol=0, atol=1e-12)
    herm = np.abs(rho - np.conj(np.transpose(rho, (0, 2, 1)))).max()
    assert herm < 1e-14
