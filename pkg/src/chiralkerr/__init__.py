"""Chiral cross-Kerr isolator/circulator simulator.

Computes the direction-dependent probe susceptibility of a Doppler-broadened
four-level (N-type) Rb vapor from the Lindblad steady state, and propagates
it through a two-path Sagnac interferometer to predict transmission spectra,
isolation ratios, cross-phase fringes, and four-port circulator routing.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND_NAME
from .atom import (AtomParams, DriveConfiguration, FieldDrive, build_hamiltonian,
                   doppler_shifted, flip_probe, rabi_from_power)
from .config import ExperimentConfig, load_config, rb85_vapor_density
from .constants import CODATA, PhysicalConstants
from .doppler import (QuadratureScheme, Susceptibility, VelocityDistribution,
                      chi_doppler_averaged, chi_velocity_class, spectrum)
from .errors import (ChiralKerrError, ConfigError, DegenerateSteadyStateError,
                     NumericalError, PhysicsViolationError, ValidationError)
from .lindblad import (DensityMatrix, DissipatorSet, build_liouvillian, evolve,
                       steady_state)
from .sagnac import (ArmResponse, BeamSplitter, CalibrationResult, RoutingTable,
                     SagnacDevice, beam_splitter_matrix, calibrate_operating_point,
                     contrast, isolation_ratio, phase_shift, route_contrasts,
                     routing_table, sagnac_port_amplitudes, transmission)
from .sweeps import (SweepResult, SweepRow, run_isolation_sweep, run_phase_sweep,
                     run_phi_l2_sweep, run_spectrum, run_switch_detuning_sweep)

__all__ = [
    "AtomParams", "ArmResponse", "BACKEND_NAME", "BeamSplitter", "CODATA",
    "CalibrationResult", "ChiralKerrError", "ConfigError", "DegenerateSteadyStateError",
    "DensityMatrix", "DissipatorSet", "DriveConfiguration", "ExperimentConfig",
    "FieldDrive", "NumericalError", "PhysicalConstants", "PhysicsViolationError",
    "QuadratureScheme", "RoutingTable", "SagnacDevice", "Susceptibility", "SweepResult",
    "SweepRow", "ValidationError", "VelocityDistribution", "beam_splitter_matrix",
    "build_hamiltonian", "build_liouvillian", "calibrate_operating_point",
    "chi_doppler_averaged", "chi_velocity_class", "contrast", "doppler_shifted",
    "evolve", "flip_probe", "isolation_ratio", "load_config", "phase_shift",
    "rabi_from_power", "rb85_vapor_density", "route_contrasts", "routing_table",
    "run_isolation_sweep", "run_phase_sweep", "run_phi_l2_sweep", "run_spectrum",
    "run_switch_detuning_sweep", "sagnac_port_amplitudes", "spectrum", "steady_state",
    "transmission",
]
