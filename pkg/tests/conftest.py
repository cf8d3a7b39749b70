import math

import numpy as np
import pytest

from chiralkerr import AtomParams, DriveConfiguration, FieldDrive

TWO_PI_MHZ = 2 * math.pi * 1e6

K_PROBE = 2 * math.pi / 795e-9
K_COUPLING = 2 * math.pi / 795e-9
K_SWITCH = 2 * math.pi / 780e-9


def make_atom(**overrides) -> AtomParams:
    params = dict(
        gamma21=2.875 * TWO_PI_MHZ,
        gamma23=2.875 * TWO_PI_MHZ,
        gamma41=3.035 * TWO_PI_MHZ,
        gamma43=3.035 * TWO_PI_MHZ,
        gamma31=0.0,
        gamma_transit=0.01 * TWO_PI_MHZ,
        mu23=2.537e-29,
        density_n0=2.513e16,
        mass=1.4099934e-25,
        temperature=311.15,
    )
    params.update(overrides)
    return AtomParams(**params)


def make_drives(rabi_p=0.0, rabi_c=0.0, rabi_s=0.0, delta_p=0.0, delta_c=0.0, delta_s=0.0,
                dir_p=1, dir_c=1, dir_s=1) -> DriveConfiguration:
    return DriveConfiguration(
        probe=FieldDrive(rabi=rabi_p, detuning=delta_p, wavevector=K_PROBE, direction=dir_p),
        coupling=FieldDrive(rabi=rabi_c, detuning=delta_c, wavevector=K_COUPLING, direction=dir_c),
        switch=FieldDrive(rabi=rabi_s, detuning=delta_s, wavevector=K_SWITCH, direction=dir_s),
    )


@pytest.fixture
def atom() -> AtomParams:
    return make_atom()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260811)
