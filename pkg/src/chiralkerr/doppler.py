"""Velocity-class susceptibility and its Maxwell-Boltzmann average.

The dimensionless probe susceptibility for one velocity class is

    chi(v) = 2 n0 |mu23|^2 rho23(v) / (hbar eps0 Omega_p)

with rho23 the steady-state coherence of the Doppler-shifted system; the
thermal average integrates chi(v) against N(v)/n0 = exp(-v^2/u^2)/(u sqrt(pi))
with u = sqrt(2 kB T / M). The factor-of-2 normalization is pinned by the
two-level analytic oracle in the test suite.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .atom import AtomParams, DriveConfiguration, build_hamiltonian, doppler_shifted
from .constants import CODATA, PhysicalConstants
from .errors import NumericalError, ValidationError
from .lindblad import DissipatorSet, build_liouvillian, steady_state

_QUADRATURE_METHODS = ("gauss-hermite", "trapezoid")


@dataclass(frozen=True)
class VelocityDistribution:
    """Maxwell-Boltzmann velocity weight N(v) = n0 exp(-v^2/u^2)/(u sqrt(pi))."""

    u: float   # most probable speed (m/s)
    n0: float  # atomic number density (m^-3)

    def __post_init__(self):
        if self.u <= 0:
            raise ValidationError("velocity distribution u must be > 0")
        if self.n0 <= 0:
            raise ValidationError("velocity distribution n0 must be > 0")

    @classmethod
    def from_atom(cls, atom: AtomParams,
                  constants: PhysicalConstants = CODATA) -> "VelocityDistribution":
        u = math.sqrt(2.0 * constants.kB * atom.temperature / atom.mass)
        return cls(u=u, n0=atom.density_n0)


@dataclass(frozen=True)
class QuadratureScheme:
    """Velocity quadrature: Gauss-Hermite (default) or wide trapezoid cross-check."""

    method: str = "gauss-hermite"
    node_count: int = 64
    span: float = 5.0  # half-width in units of u; trapezoid only

    def __post_init__(self):
        if self.method not in _QUADRATURE_METHODS:
            raise ValidationError(f"quadrature method must be one of {_QUADRATURE_METHODS}")
        if self.node_count < 8:
            raise ValidationError("quadrature node_count must be >= 8")
        if self.method == "trapezoid" and self.span < 4:
            raise ValidationError("trapezoid quadrature span must be >= 4 (units of u)")

    def nodes_and_weights(self, u: float):
        """Velocity nodes (ascending) and weights for averaging against N(v)/n0.

        The weights integrate the unit Gaussian: sum(w) = 1 to quadrature
        accuracy, so ``sum(w_i f(v_i))`` approximates ``Int f(v) N(v)/n0 dv``.
        """
        if self.method == "gauss-hermite":
            x, w = np.polynomial.hermite.hermgauss(self.node_count)
            return u * x, w / math.sqrt(math.pi)
        v = np.linspace(-self.span * u, self.span * u, self.node_count)
        w = np.exp(-((v / u) ** 2)) / (u * math.sqrt(math.pi))
        dv = v[1] - v[0]
        w = w * dv
        w[0] *= 0.5
        w[-1] *= 0.5
        return v, w


@dataclass(frozen=True)
class Susceptibility:
    """Complex dimensionless probe susceptibility for one propagation pattern."""

    value: complex
    label: str  # "co" | "counter" | "custom"


def quadrature_mass(dist: VelocityDistribution, quad: QuadratureScheme) -> float:
    """Integral of N(v) under the scheme; equals n0 up to quadrature error."""
    _, w = quad.nodes_and_weights(dist.u)
    return dist.n0 * float(np.sum(w))


def _chi_scale(atom: AtomParams, omega_p: float, constants: PhysicalConstants) -> float:
    return 2.0 * atom.density_n0 * atom.mu23 ** 2 / (constants.hbar * constants.eps0 * omega_p)


def chi_velocity_class(config: DriveConfiguration, atom: AtomParams, v: float,
                       constants: PhysicalConstants = CODATA) -> complex:
    """Susceptibility contribution of the velocity class ``v`` (full density n0).

    Pure function; uses the robust reference solver. Requires Omega_p > 0
    because the linear susceptibility divides the coherence by the probe
    Rabi frequency.
    """
    if config.probe.rabi <= 0:
        raise ValidationError("chi requires a nonzero probe Rabi frequency")
    shifted = doppler_shifted(config, v)
    diss = DissipatorSet.from_atom(atom)
    rho = steady_state(build_liouvillian(build_hamiltonian(shifted), diss), context=diss.rates)
    return _chi_scale(atom, config.probe.rabi, constants) * rho.matrix[1, 2]


def _diag_shift_coefficients(config: DriveConfiguration) -> np.ndarray:
    """Per-unit-velocity diagonal correction to the vectorized Liouvillian.

    The Doppler shift changes only the Hamiltonian diagonal, linearly in v:
    H(v) = H(0) + v * diag(d) with d from the direction-weighted wave
    vectors, so L(v) = L(0) - i v (diag(d) (x) I - I (x) diag(d)).
    """
    sp = config.probe.direction * config.probe.wavevector
    sc = config.coupling.direction * config.coupling.wavevector
    ss = config.switch.direction * config.switch.wavevector
    d = np.array([0.0, -sc, -(sc - sp), -(sc - sp + ss)])
    return -1j * (np.repeat(d, 4) - np.tile(d, 4))


def rho23_velocity_batch(config: DriveConfiguration, atom: AtomParams,
                         velocities: np.ndarray) -> np.ndarray:
    """Steady-state rho23 for a batch of velocity classes (backend kernel).

    Any node the fast kernel rejects is retried through the reference solver
    so failures surface with full diagnostics and the offending node index.
    """
    diss = DissipatorSet.from_atom(atom)
    l_base = np.ascontiguousarray(build_liouvillian(build_hamiltonian(config), diss))
    coeff = np.ascontiguousarray(_diag_shift_coefficients(config))
    velocities = np.ascontiguousarray(velocities, dtype=float)
    rho, status = _kernels.steady_batch(l_base, coeff, velocities)
    if np.any(status != 0):
        for i in np.nonzero(status)[0]:
            v = velocities[i]
            try:
                shifted = doppler_shifted(config, float(v))
                rho[i] = steady_state(
                    build_liouvillian(build_hamiltonian(shifted), diss), context=diss.rates
                ).matrix
            except Exception as exc:
                raise NumericalError(
                    f"steady-state solve failed at velocity node {i} (v = {v:.6g} m/s): {exc}"
                ) from exc
    return rho[:, 1, 2]


def chi_doppler_averaged(config: DriveConfiguration, atom: AtomParams,
                         quad: QuadratureScheme,
                         constants: PhysicalConstants = CODATA) -> Susceptibility:
    """Thermal-averaged susceptibility chi for the given propagation pattern.

    Deterministic for a fixed scheme: nodes are summed in ascending order.
    """
    if config.probe.rabi <= 0:
        raise ValidationError("chi requires a nonzero probe Rabi frequency")
    dist = VelocityDistribution.from_atom(atom, constants)
    v_nodes, weights = quad.nodes_and_weights(dist.u)
    rho23 = rho23_velocity_batch(config, atom, v_nodes)
    total = complex(0.0)
    for w, r in zip(weights, rho23):
        total += w * r
    return Susceptibility(
        value=_chi_scale(atom, config.probe.rabi, constants) * total,
        label=config.label,
    )


def spectrum(config: DriveConfiguration, atom: AtomParams, quad: QuadratureScheme,
             detuning_grid, constants: PhysicalConstants = CODATA):
    """chi_doppler_averaged with the probe detuning swept over ``detuning_grid``.

    The grid must be nonempty and strictly increasing; order is preserved in
    the returned list of (detuning, Susceptibility) pairs.
    """
    grid = np.asarray(detuning_grid, dtype=float)
    if grid.size == 0:
        raise ValidationError("detuning grid must be nonempty")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValidationError("detuning grid must be strictly increasing")
    out = []
    for dp in grid:
        probed = replace(config, probe=replace(config.probe, detuning=float(dp)))
        out.append((float(dp), chi_doppler_averaged(probed, atom, quad, constants)))
    return out
