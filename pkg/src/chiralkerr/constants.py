"""Physical constants used throughout the package.

This is the single place where fundamental constants are declared; every
other module takes a :class:`PhysicalConstants` argument (defaulting to
:data:`CODATA`) instead of re-declaring values.
"""

from dataclasses import dataclass

import scipy.constants as _sc

from .errors import ValidationError


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants in SI units.

    Attributes
    ----------
    hbar : float
        Reduced Planck constant (J s).
    eps0 : float
        Vacuum permittivity (F/m).
    kB : float
        Boltzmann constant (J/K).
    c : float
        Speed of light in vacuum (m/s).
    """

    hbar: float = _sc.hbar
    eps0: float = _sc.epsilon_0
    kB: float = _sc.k
    c: float = _sc.c

    def __post_init__(self):
        for name in ("hbar", "eps0", "kB", "c"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"physical constant {name} must be strictly positive")


CODATA = PhysicalConstants()
