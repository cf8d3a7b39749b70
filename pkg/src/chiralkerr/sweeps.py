"""Parameter sweeps: transmission spectra, isolation, switch detuning, fringes.

Every runner validates that the configured sweep axis matches before any
computation, evaluates the grid points independently (optionally on a worker
pool), and gathers rows in grid order so output is deterministic regardless
of scheduling. Switch sweeps probe the medium on resonance (probe detuning
forced to zero), matching how the isolator figure of merit is defined.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .atom import DriveConfiguration, flip_probe
from .config import ExperimentConfig
from .doppler import Susceptibility, chi_doppler_averaged
from .errors import ValidationError
from .sagnac import ArmResponse, SagnacDevice, phase_shift, sagnac_port_amplitudes, transmission

_CSV_COLUMNS = (
    "axis", "T_co", "T_cou", "isolation_dB", "phase_co_rad", "phase_counter_rad",
    "delta_phi_rad", "p2_intensity", "p4_intensity",
)


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    t_co: float
    t_cou: float
    isolation_db: float
    phase_co: float
    phase_counter: float
    delta_phi: float
    p2_intensity: float
    p4_intensity: float

    def as_tuple(self):
        return (self.axis_value, self.t_co, self.t_cou, self.isolation_db, self.phase_co,
                self.phase_counter, self.delta_phi, self.p2_intensity, self.p4_intensity)


@dataclass(frozen=True)
class SweepResult:
    axis: str
    rows: tuple

    columns = _CSV_COLUMNS


def _isolation_db(t_co: float, t_cou: float) -> float:
    """Row-level isolation; tolerates exact zeros (underflowed transmission)."""
    if t_co > 0 and t_cou > 0:
        return 10.0 * math.log10(t_co / t_cou)
    if t_co > 0:
        return math.inf
    if t_cou > 0:
        return -math.inf
    return math.nan


def _row_from_chi(config: ExperimentConfig, axis_value: float,
                  chi_plus: Susceptibility, chi_minus: Susceptibility,
                  phi_l2: float) -> SweepRow:
    k_p = config.probe.wavevector
    length = config.geometry.cell_length
    t_co = transmission(chi_plus, k_p, length)
    t_cou = transmission(chi_minus, k_p, length)
    phase_co = phase_shift(chi_plus, k_p, length)
    phase_counter = phase_shift(chi_minus, k_p, length)

    device = SagnacDevice(
        bs=config.beam_splitter(),
        arm_l1_forward=ArmResponse(math.sqrt(t_co), phase_co),
        arm_l1_backward=ArmResponse(math.sqrt(t_cou), phase_counter),
        arm_l2=ArmResponse(1.0, phi_l2),
        cell_length=length,
    )
    amps = sagnac_port_amplitudes(device, "P1", "forward")
    return SweepRow(
        axis_value=axis_value,
        t_co=t_co,
        t_cou=t_cou,
        isolation_db=_isolation_db(t_co, t_cou),
        phase_co=phase_co,
        phase_counter=phase_counter,
        delta_phi=phase_co - phi_l2,
        p2_intensity=abs(amps["P2"]) ** 2,
        p4_intensity=abs(amps["P4"]) ** 2,
    )


def _drives_for(config: ExperimentConfig, axis: str, value: float):
    """Drive configuration and phi_L2 for one grid point of the given axis."""
    phi_l2 = config.geometry.phi_l2
    base: DriveConfiguration = config.drive_configuration()
    if axis == "probe_detuning":
        return replace(base, probe=replace(base.probe, detuning=value)), phi_l2
    if axis == "switch_power":
        switch = replace(config.switch, power=value).field_drive()
        drives = replace(base, probe=replace(base.probe, detuning=0.0), switch=switch)
        return drives, phi_l2
    if axis == "switch_detuning":
        drives = replace(base, probe=replace(base.probe, detuning=0.0),
                         switch=replace(base.switch, detuning=value))
        return drives, phi_l2
    if axis == "phi_l2":
        return base, value
    raise ValidationError(f"unsupported sweep axis {axis!r}")


def _evaluate_point(payload) -> SweepRow:
    config, axis, value = payload
    drives, phi_l2 = _drives_for(config, axis, value)
    chi_plus = chi_doppler_averaged(drives, config.atom, config.quadrature)
    chi_minus = chi_doppler_averaged(flip_probe(drives), config.atom, config.quadrature)
    return _row_from_chi(config, value, chi_plus, chi_minus, phi_l2)


def _check_axis(config: ExperimentConfig, axis: str) -> None:
    if config.sweep.axis != axis:
        raise ValidationError(
            f"sweep axis mismatch: runner needs {axis!r}, configuration has "
            f"{config.sweep.axis!r}"
        )


def _run(config: ExperimentConfig, axis: str, workers: int = 1) -> SweepResult:
    _check_axis(config, axis)
    payloads = [(config, axis, float(v)) for v in config.sweep.grid()]
    if workers > 1:
        chunk = max(1, len(payloads) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_point, payloads, chunksize=chunk))
    else:
        rows = [_evaluate_point(p) for p in payloads]
    return SweepResult(axis=axis, rows=tuple(rows))


def run_spectrum(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    """Probe-detuning sweep: co/counter transmissions, phases, port fringes."""
    return _run(config, "probe_detuning", workers)


def run_isolation_sweep(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    """Switch-power sweep of the on-resonance isolator figures of merit."""
    return _run(config, "switch_power", workers)


def run_switch_detuning_sweep(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    """Switch-detuning sweep of the on-resonance transmissions."""
    return _run(config, "switch_detuning", workers)


def run_phase_sweep(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    """Probe-detuning sweep emphasizing the interferometer fringe columns.

    Identical computation to :func:`run_spectrum` (the fringe columns are
    always filled); kept as its own entry point because fringe scans are run
    at several phi_L2 offsets against the same configuration.
    """
    return _run(config, "probe_detuning", workers)


def run_phi_l2_sweep(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    """Fringe versus phi_L2 at fixed drives; the medium is evaluated once."""
    _check_axis(config, "phi_l2")
    drives = config.drive_configuration()
    chi_plus = chi_doppler_averaged(drives, config.atom, config.quadrature)
    chi_minus = chi_doppler_averaged(flip_probe(drives), config.atom, config.quadrature)
    rows = tuple(
        _row_from_chi(config, float(phi), chi_plus, chi_minus, float(phi))
        for phi in config.sweep.grid()
    )
    return SweepResult(axis="phi_l2", rows=rows)


RUNNERS = {
    "probe_detuning": run_spectrum,
    "switch_power": run_isolation_sweep,
    "switch_detuning": run_switch_detuning_sweep,
    "phi_l2": run_phi_l2_sweep,
}
