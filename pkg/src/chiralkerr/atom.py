"""Four-level atom, drive fields, and the rotating-frame Hamiltonian.

Level scheme (basis order |1>, |2>, |3>, |4>):

    |1>  ground       -- coupling --> |2>  excited (D1)
    |3>  ground       -- probe    --> |2>
    |3>               -- switch   --> |4>  excited (D2)

Sign conventions, fixed here and used everywhere:

* detuning  Delta = omega_laser - omega_atomic  (rad/s, signed);
* Doppler   Delta' = Delta - direction * k * v, so an atom moving at +v
  along a +1-direction beam sees the laser red-shifted.

All frequencies are angular (rad/s); the Hamiltonian carries units of rad/s
(hbar divided out).
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .constants import CODATA, PhysicalConstants
from .errors import ValidationError

#: Hilbert-space dimension of the level scheme. Hard-coded: the solver stack
#: (16x16 Liouvillians, vectorization) assumes exactly four levels.
DIM = 4


@dataclass(frozen=True)
class AtomParams:
    """Decay, dephasing, and vapor parameters of the four-level atom.

    Rates are angular (rad/s). ``gamma21``/``gamma23`` are the spontaneous
    decay rates of |2> into |1>/|3>, ``gamma41``/``gamma43`` those of |4>.
    ``gamma31`` is pure dephasing between the two ground states and
    ``gamma_transit`` the ground-population exchange rate modelling the
    finite beam-transit time (it must stay positive so the steady state is
    unique even with all drives off).
    """

    gamma21: float
    gamma23: float
    gamma41: float
    gamma43: float
    gamma31: float
    gamma_transit: float
    mu23: float          # probe transition dipole moment (C m)
    density_n0: float    # atomic number density (m^-3)
    mass: float          # atomic mass (kg)
    temperature: float   # vapor temperature (K)

    def __post_init__(self):
        for name in ("gamma21", "gamma23", "gamma41", "gamma43", "gamma31"):
            if getattr(self, name) < 0:
                raise ValidationError(f"atom.{name} must be >= 0")
        if self.gamma_transit <= 0:
            raise ValidationError("atom.gamma_transit must be > 0 (steady-state uniqueness)")
        if self.mu23 <= 0:
            raise ValidationError("atom.mu23 must be > 0")
        if self.density_n0 <= 0:
            raise ValidationError("atom.density_n0 must be > 0")
        if self.mass <= 0:
            raise ValidationError("atom.mass must be > 0")
        if self.temperature <= 0:
            raise ValidationError("atom.temperature must be > 0")


@dataclass(frozen=True)
class FieldDrive:
    """One classical drive field: Rabi frequency, detuning, wave vector, direction."""

    rabi: float        # rad/s, >= 0
    detuning: float    # rad/s, signed
    wavevector: float  # rad/m, > 0
    direction: int     # propagation sign, +1 or -1

    def __post_init__(self):
        if self.rabi < 0:
            raise ValidationError("drive rabi frequency must be >= 0")
        if self.wavevector <= 0:
            raise ValidationError("drive wavevector must be > 0")
        if self.direction not in (+1, -1):
            raise ValidationError("drive direction must be +1 or -1")


@dataclass(frozen=True)
class DriveConfiguration:
    """The probe/coupling/switch triple; propagation geometry lives in the signs."""

    probe: FieldDrive
    coupling: FieldDrive
    switch: FieldDrive

    @property
    def is_copropagating(self) -> bool:
        return self.probe.direction == self.coupling.direction == self.switch.direction

    @property
    def is_counterpropagating(self) -> bool:
        return (self.probe.direction != self.coupling.direction
                and self.probe.direction != self.switch.direction)

    @property
    def label(self) -> str:
        if self.is_copropagating:
            return "co"
        if self.is_counterpropagating:
            return "counter"
        return "custom"


def doppler_shifted(config: DriveConfiguration, v: float) -> DriveConfiguration:
    """Return the drive configuration seen by an atom moving at velocity ``v``.

    Each detuning becomes ``Delta - direction * k * v``; Rabi frequencies,
    wave vectors, and directions are unchanged.
    """
    def shift(f: FieldDrive) -> FieldDrive:
        return replace(f, detuning=f.detuning - f.direction * f.wavevector * v)

    return DriveConfiguration(
        probe=shift(config.probe),
        coupling=shift(config.coupling),
        switch=shift(config.switch),
    )


def flip_probe(config: DriveConfiguration) -> DriveConfiguration:
    """Reverse the probe propagation direction (co <-> counter geometry)."""
    return replace(config, probe=replace(config.probe, direction=-config.probe.direction))


def build_hamiltonian(config: DriveConfiguration) -> np.ndarray:
    """Rotating-frame Hamiltonian of the driven four-level system, in rad/s.

    Diagonal: (0, Delta_c, Delta_c - Delta_p, Delta_c - Delta_p + Delta_s).
    Off-diagonal couplings: -Omega_c/2 on (1,2), -Omega_p/2 on (2,3),
    -Omega_s/2 on (3,4), plus Hermitian conjugates. Detunings must already be
    Doppler-shifted if a specific velocity class is intended.
    """
    dp = config.probe.detuning
    dc = config.coupling.detuning
    ds = config.switch.detuning
    h = np.zeros((DIM, DIM), dtype=complex)
    h[1, 1] = dc
    h[2, 2] = dc - dp
    h[3, 3] = dc - dp + ds
    h[0, 1] = h[1, 0] = -0.5 * config.coupling.rabi
    h[1, 2] = h[2, 1] = -0.5 * config.probe.rabi
    h[2, 3] = h[3, 2] = -0.5 * config.switch.rabi
    return h


def rabi_from_power(power: float, beam_diameter: float, dipole: float,
                    constants: PhysicalConstants = CODATA) -> float:
    """Peak Rabi frequency of a Gaussian-equivalent plane wave of given power.

    Uses the peak-intensity plane-wave field E = sqrt(2 P / (pi (d/2)^2 c eps0))
    and Omega = dipole * E / hbar. Returns rad/s.
    """
    if beam_diameter <= 0:
        raise ValidationError("beam_diameter must be > 0")
    if dipole <= 0:
        raise ValidationError("dipole must be > 0")
    if power < 0:
        raise ValidationError("power must be >= 0")
    area = math.pi * (0.5 * beam_diameter) ** 2
    field = math.sqrt(2.0 * power / (area * constants.c * constants.eps0))
    return dipole * field / constants.hbar
