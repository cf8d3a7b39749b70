"""Two-path Sagnac interferometer: arm responses, port routing, calibration.

The device is modelled as a 2-in/2-out interferometer traversed forward
(inputs P1/P3) or backward (inputs P2/P4), with the chiral medium entirely
inside the direction-dependent response of arm L1. Mirrors and polarization
optics are ideal. Mode convention (both traversal directions):

    arm L1 acts on internal mode 0, arm L2 on internal mode 1;
    forward:  in P1 -> mode 0, in P3 -> mode 1; out mode 0 -> P4, mode 1 -> P2
    backward: in P4 -> mode 0, in P2 -> mode 1; out mode 0 -> P1, mode 1 -> P3

so ideal pi-chirality circulates P1 -> P2 -> P3 -> P4 -> P1.
"""

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .doppler import Susceptibility
from .errors import PhysicsViolationError, ValidationError

PORTS = ("P1", "P2", "P3", "P4")

_GAIN_TOL = -1e-9

#: Circulation routes: (input port, target port, rival port, traversal,
#: input mode, target mode, rival mode).
_ROUTES = (
    ("P1", "P2", "P4", "forward", 0, 1, 0),
    ("P2", "P3", "P1", "backward", 1, 1, 0),
    ("P3", "P4", "P2", "forward", 1, 0, 1),
    ("P4", "P1", "P3", "backward", 0, 0, 1),
)

_INPUT_MODES = {"forward": {"P1": 0, "P3": 1}, "backward": {"P4": 0, "P2": 1}}
_OUTPUT_PORTS = {"forward": ("P4", "P2"), "backward": ("P1", "P3")}


@dataclass(frozen=True)
class ArmResponse:
    """Amplitude transmission and phase accumulated along one arm."""

    amplitude_transmission: float
    phase: float

    def __post_init__(self):
        if not 0.0 <= self.amplitude_transmission <= 1.0:
            raise ValidationError("arm amplitude transmission must lie in [0, 1]")
        if not math.isfinite(self.phase):
            raise ValidationError("arm phase must be finite")

    @property
    def amplitude(self) -> complex:
        return self.amplitude_transmission * cmath.exp(1j * self.phase)

    @classmethod
    def from_susceptibility(cls, chi: Susceptibility, k_p: float, length: float) -> "ArmResponse":
        """Arm response of a medium of the given susceptibility and length."""
        return cls(
            amplitude_transmission=math.sqrt(transmission(chi, k_p, length)),
            phase=phase_shift(chi, k_p, length),
        )


@dataclass(frozen=True)
class BeamSplitter:
    """Mixing angle theta and relative phase phi of the (lossless) splitter."""

    theta: float
    phi: float = 0.0


@dataclass(frozen=True)
class SagnacDevice:
    """Beam splitter plus the two arm responses (L1 direction-dependent)."""

    bs: BeamSplitter
    arm_l1_forward: ArmResponse
    arm_l1_backward: ArmResponse
    arm_l2: ArmResponse
    cell_length: float

    def __post_init__(self):
        if abs(self.arm_l2.amplitude_transmission - 1.0) > 1e-12:
            raise ValidationError("arm L2 must be lossless (amplitude transmission 1)")
        if self.cell_length <= 0:
            raise ValidationError("cell_length must be > 0")


@dataclass(frozen=True)
class RoutingTable:
    """Output intensity fractions per input port; rows ordered P1..P4."""

    fractions: dict

    def route_fraction(self, src: str, dst: str) -> float:
        return self.fractions[src][dst]


@dataclass(frozen=True)
class CalibrationResult:
    """Operating point found by the circulator grid search."""

    detuning: float
    phi_l2: float
    routing: RoutingTable
    min_route_contrast: float
    route_contrasts: dict
    reciprocity_limited: bool


def transmission(chi: Susceptibility, k_p: float, length: float) -> float:
    """Intensity transmission exp(-k_p * length * Im chi) through the medium."""
    if length <= 0:
        raise ValidationError("medium length must be > 0")
    im = chi.value.imag
    if im < _GAIN_TOL:
        raise PhysicsViolationError(
            f"Im chi = {im:.3e} < {_GAIN_TOL:.0e}: passive medium cannot show gain"
        )
    return min(math.exp(-k_p * length * im), 1.0)


def phase_shift(chi: Susceptibility, k_p: float, length: float) -> float:
    """Dispersive phase k_p * length * Re chi / 2 (dilute medium, n = 1 + chi/2)."""
    if length <= 0:
        raise ValidationError("medium length must be > 0")
    return k_p * length * chi.value.real / 2.0


def beam_splitter_matrix(bs: BeamSplitter) -> np.ndarray:
    """Unitary amplitude matrix [[cos, i e^{-i phi} sin], [i e^{i phi} sin, cos]]."""
    ct, st = math.cos(bs.theta), math.sin(bs.theta)
    return np.array(
        [
            [ct, 1j * cmath.exp(-1j * bs.phi) * st],
            [1j * cmath.exp(1j * bs.phi) * st, ct],
        ],
        dtype=complex,
    )


def _arm_amplitudes(device: SagnacDevice, direction: str):
    arm1 = device.arm_l1_forward if direction == "forward" else device.arm_l1_backward
    return arm1.amplitude, device.arm_l2.amplitude


def sagnac_port_amplitudes(device: SagnacDevice, input_port: str, direction: str) -> dict:
    """Output amplitudes at both exit ports for a unit input at ``input_port``.

    Computes B diag(a1, a2) B acting on the input mode, with a1 the
    direction-dependent arm-L1 amplitude and a2 the lossless L2 phase.
    """
    if direction not in _INPUT_MODES:
        raise ValidationError("direction must be 'forward' or 'backward'")
    modes = _INPUT_MODES[direction]
    if input_port not in modes:
        valid = "/".join(sorted(modes))
        raise ValidationError(f"input port {input_port} invalid for {direction} (use {valid})")
    a1, a2 = _arm_amplitudes(device, direction)
    b = beam_splitter_matrix(device.bs)
    out = b @ np.diag([a1, a2]) @ b[:, modes[input_port]]
    ports = _OUTPUT_PORTS[direction]
    return {ports[0]: complex(out[0]), ports[1]: complex(out[1])}


def isolation_ratio(t_co: float, t_cou: float) -> float:
    """Isolation 10 log10(T_co / T_cou) in dB."""
    if t_co <= 0 or t_cou <= 0:
        raise ValidationError("isolation ratio requires strictly positive transmissions")
    return 10.0 * math.log10(t_co / t_cou)


def contrast(t_max: float, t_min: float) -> float:
    """Fringe contrast (T_max - T_min) / (T_max + T_min)."""
    if t_min < 0 or t_max < t_min or t_max <= 0:
        raise ValidationError("contrast requires t_max >= t_min >= 0 with t_max > 0")
    return (t_max - t_min) / (t_max + t_min)


def routing_table(device: SagnacDevice) -> RoutingTable:
    """Intensity fractions for all four injections (forward and backward)."""
    fractions = {}
    for port in PORTS:
        direction = "forward" if port in ("P1", "P3") else "backward"
        amps = sagnac_port_amplitudes(device, port, direction)
        row = {p: 0.0 for p in PORTS}
        for out_port, amp in amps.items():
            row[out_port] = abs(amp) ** 2
        fractions[port] = row
    return RoutingTable(fractions=fractions)


def route_contrasts(table: RoutingTable) -> dict:
    """Directivity of each circulation route: (I_target - I_rival) / sum.

    1 for ideal routing, 0 for an even split (or a dead port), negative when
    the power exits the wrong side.
    """
    out = {}
    for src, dst, rival, *_ in _ROUTES:
        i_dst = table.route_fraction(src, dst)
        i_riv = table.route_fraction(src, rival)
        total = i_dst + i_riv
        out[(src, dst)] = 0.0 if total == 0 else (i_dst - i_riv) / total
    return out


def _spectra_grids(spectrum_plus, spectrum_minus) -> np.ndarray:
    if len(spectrum_plus) == 0 or len(spectrum_minus) == 0:
        raise ValidationError("calibration requires nonempty spectra")
    grid_p = np.array([d for d, _ in spectrum_plus], dtype=float)
    grid_m = np.array([d for d, _ in spectrum_minus], dtype=float)
    if grid_p.shape != grid_m.shape or not np.array_equal(grid_p, grid_m):
        raise ValidationError("co- and counter-propagating spectra must share one grid")
    return grid_p


def calibrate_operating_point(spectrum_plus, spectrum_minus, template: SagnacDevice,
                              k_p: float, phi_count: int = 720) -> CalibrationResult:
    """Grid-search (probe detuning, phi_L2) maximizing the worst route contrast.

    ``spectrum_plus``/``spectrum_minus`` are (detuning, Susceptibility) lists
    on a common grid, as produced by :func:`chiralkerr.doppler.spectrum` for
    the forward and backward probe. Ties break toward the smallest |detuning|
    and then the smallest phi_L2 in [0, 2 pi). When no operating point beats
    the reciprocal ceiling (best worst-route contrast <= 0), the result is
    flagged ``reciprocity_limited``.
    """
    grid = _spectra_grids(spectrum_plus, spectrum_minus)
    if phi_count < 4:
        raise ValidationError("phi grid needs at least 4 points")
    b = beam_splitter_matrix(template.bs)
    phi_grid = np.arange(phi_count) * (2.0 * math.pi / phi_count)
    a2 = np.exp(1j * phi_grid)

    best = None  # (min_contrast, |detuning|, phi, index, phi_index)
    for i, dp in enumerate(grid):
        arm_f = ArmResponse.from_susceptibility(spectrum_plus[i][1], k_p, template.cell_length)
        arm_b = ArmResponse.from_susceptibility(spectrum_minus[i][1], k_p, template.cell_length)
        amps = {"forward": arm_f.amplitude, "backward": arm_b.amplitude}
        worst = None
        for _, _, _, direction, m_in, m_dst, m_riv in _ROUTES:
            a1 = amps[direction]
            dst = b[m_dst, 0] * a1 * b[0, m_in] + b[m_dst, 1] * a2 * b[1, m_in]
            riv = b[m_riv, 0] * a1 * b[0, m_in] + b[m_riv, 1] * a2 * b[1, m_in]
            i_dst = np.abs(dst) ** 2
            i_riv = np.abs(riv) ** 2
            total = i_dst + i_riv
            with np.errstate(invalid="ignore"):
                c = np.where(total > 0, (i_dst - i_riv) / np.where(total > 0, total, 1.0), 0.0)
            worst = c if worst is None else np.minimum(worst, c)
        j = int(np.argmax(worst))
        cand = (float(worst[j]), abs(float(dp)), float(phi_grid[j]), i, j)
        if (best is None or cand[0] > best[0]
                or (cand[0] == best[0] and (cand[1], cand[2]) < (best[1], best[2]))):
            best = cand

    min_contrast, _, phi_l2, i_best, _ = best
    arm_f = ArmResponse.from_susceptibility(spectrum_plus[i_best][1], k_p, template.cell_length)
    arm_b = ArmResponse.from_susceptibility(spectrum_minus[i_best][1], k_p, template.cell_length)
    device = replace(
        template,
        arm_l1_forward=arm_f,
        arm_l1_backward=arm_b,
        arm_l2=ArmResponse(1.0, phi_l2),
    )
    table = routing_table(device)
    return CalibrationResult(
        detuning=float(grid[i_best]),
        phi_l2=phi_l2,
        routing=table,
        min_route_contrast=min_contrast,
        route_contrasts=route_contrasts(table),
        reciprocity_limited=min_contrast <= 1e-12,
    )
