"""Experiment configuration: JSON loading, defaults, validation, provenance.

A configuration is a JSON object with sections ``atom``, ``drives``
(``probe``/``coupling``/``switch``), ``geometry``, ``quadrature`` and
``sweep``. Every key has a documented default shipped in
``configs/rb85-defaults.json`` (reference data for the Rb-85 D lines, not
tied to any particular experiment); user files override any subset. Angular
frequencies accept the shorthand ``{"MHz_2pi": x}`` for 2 pi x MHz. Keys
starting with an underscore are comments and ignored.
"""

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .atom import AtomParams, DriveConfiguration, FieldDrive, rabi_from_power
from .constants import CODATA, PhysicalConstants
from .doppler import QuadratureScheme, VelocityDistribution
from .errors import ConfigError, ValidationError
from .sagnac import ArmResponse, BeamSplitter, SagnacDevice

DEFAULTS_NAME = "rb85-defaults"

SWEEP_AXES = ("probe_detuning", "switch_power", "switch_detuning", "phi_l2")

#: Natural isotopic abundance of Rb-85 (reference data).
RB85_ABUNDANCE = 0.7217

_TWO_PI_MHZ = 2.0 * math.pi * 1e6
_TORR = 133.322368  # Pa


def rb85_vapor_density(temperature: float,
                       constants: PhysicalConstants = CODATA) -> float:
    """Rb-85 number density (m^-3) from the standard liquid-phase vapor fit.

    log10(P/torr) = 15.88253 - 4529.635/T + 0.00058663 T - 2.99138 log10(T),
    scaled by the natural Rb-85 abundance. Reference data, not a measured
    cell calibration; density is the recognised fit knob of the model.
    """
    if temperature <= 0:
        raise ValidationError("temperature must be > 0")
    log10_p = (15.88253 - 4529.635 / temperature + 0.00058663 * temperature
               - 2.99138 * math.log10(temperature))
    pressure = _TORR * 10.0 ** log10_p
    return RB85_ABUNDANCE * pressure / (constants.kB * temperature)


@dataclass(frozen=True)
class DriveSettings:
    """Laser-facing settings of one drive field (before Rabi conversion)."""

    power: float        # W
    detuning: float     # rad/s
    diameter: float     # m
    wavelength: float   # m
    dipole: float       # C m
    direction: int
    rabi_scale: float   # single sanctioned power-calibration knob

    def validate(self, prefix: str) -> None:
        if self.power < 0:
            raise ConfigError(f"{prefix}.power must be >= 0")
        if self.diameter <= 0:
            raise ConfigError(f"{prefix}.diameter must be > 0")
        if self.wavelength <= 0:
            raise ConfigError(f"{prefix}.wavelength must be > 0")
        if self.dipole <= 0:
            raise ConfigError(f"{prefix}.dipole must be > 0")
        if self.direction not in (+1, -1):
            raise ConfigError(f"{prefix}.direction must be +1 or -1")
        if self.rabi_scale <= 0:
            raise ConfigError(f"{prefix}.rabi_scale must be > 0")

    @property
    def wavevector(self) -> float:
        return 2.0 * math.pi / self.wavelength

    def rabi(self, constants: PhysicalConstants = CODATA) -> float:
        return self.rabi_scale * rabi_from_power(self.power, self.diameter, self.dipole,
                                                 constants)

    def field_drive(self, constants: PhysicalConstants = CODATA) -> FieldDrive:
        return FieldDrive(rabi=self.rabi(constants), detuning=self.detuning,
                          wavevector=self.wavevector, direction=self.direction)


@dataclass(frozen=True)
class GeometrySettings:
    cell_length: float
    bs_theta: float
    bs_phi: float
    phi_l2: float

    def validate(self) -> None:
        if self.cell_length <= 0:
            raise ConfigError("geometry.cell_length must be > 0")


@dataclass(frozen=True)
class SweepSettings:
    axis: str
    start: float
    stop: float
    count: int

    def validate(self) -> None:
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"sweep.axis must be one of {SWEEP_AXES}")
        if self.count < 2:
            raise ConfigError("sweep.count must be >= 2")
        if not self.stop > self.start:
            raise ConfigError("sweep.stop must exceed sweep.start")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully validated configuration with conversion helpers."""

    atom: AtomParams
    probe: DriveSettings
    coupling: DriveSettings
    switch: DriveSettings
    geometry: GeometrySettings
    quadrature: QuadratureScheme
    sweep: SweepSettings
    provenance: dict

    def drive_configuration(self, constants: PhysicalConstants = CODATA) -> DriveConfiguration:
        return DriveConfiguration(
            probe=self.probe.field_drive(constants),
            coupling=self.coupling.field_drive(constants),
            switch=self.switch.field_drive(constants),
        )

    def velocity_distribution(self, constants: PhysicalConstants = CODATA) -> VelocityDistribution:
        return VelocityDistribution.from_atom(self.atom, constants)

    def beam_splitter(self) -> BeamSplitter:
        return BeamSplitter(theta=self.geometry.bs_theta, phi=self.geometry.bs_phi)

    def device_template(self) -> SagnacDevice:
        """Sagnac device with placeholder lossless arms (filled in per point)."""
        return SagnacDevice(
            bs=self.beam_splitter(),
            arm_l1_forward=ArmResponse(1.0, 0.0),
            arm_l1_backward=ArmResponse(1.0, 0.0),
            arm_l2=ArmResponse(1.0, self.geometry.phi_l2),
            cell_length=self.geometry.cell_length,
        )


def _strip_comments(obj):
    if isinstance(obj, dict):
        return {k: _strip_comments(v) for k, v in obj.items() if not k.startswith("_")}
    return obj


def _convert_units(obj, path):
    """Resolve {"MHz_2pi": x} shorthands anywhere in the tree."""
    if isinstance(obj, dict):
        if set(obj) == {"MHz_2pi"}:
            value = obj["MHz_2pi"]
            if not isinstance(value, (int, float)):
                raise ConfigError(f"{path}: MHz_2pi value must be a number")
            return _TWO_PI_MHZ * value
        return {k: _convert_units(v, f"{path}.{k}" if path else k) for k, v in obj.items()}
    return obj


def _is_shorthand(value) -> bool:
    return isinstance(value, dict) and set(value) == {"MHz_2pi"}


def _merge(default, user, path, provenance):
    """Deep merge, recording which leaves the user file overrode."""
    if (isinstance(default, dict) and isinstance(user, dict)
            and not _is_shorthand(default) and not _is_shorthand(user)):
        out = {}
        for key in user:
            if key not in default:
                raise ConfigError(f"unknown configuration key: {f'{path}.{key}' if path else key}")
        for key, dval in default.items():
            child = f"{path}.{key}" if path else key
            if key in user:
                out[key] = _merge(dval, user[key], child, provenance)
            else:
                out[key] = dval
                _mark(provenance, dval, child, "default")
        return out
    provenance[path] = "config"
    return user


def _mark(provenance, value, path, tag):
    if isinstance(value, dict) and not _is_shorthand(value):
        for k, v in value.items():
            _mark(provenance, v, f"{path}.{k}", tag)
    else:
        provenance[path] = tag


def _require_number(tree, path, minimum=None, strict=False):
    value = _lookup(tree, path)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path} must be a number, got {value!r}")
    if minimum is not None:
        if strict and not value > minimum:
            raise ConfigError(f"{path} must be > {minimum}")
        if not strict and not value >= minimum:
            raise ConfigError(f"{path} must be >= {minimum}")
    return float(value)


def _lookup(tree, path):
    node = tree
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            raise ConfigError(f"missing configuration key: {path}")
        node = node[part]
    return node


def packaged_config_path(name: str) -> Path:
    """Filesystem path of a shipped configuration (name with or without .json)."""
    fname = name if name.endswith(".json") else f"{name}.json"
    ref = resources.files("chiralkerr").joinpath("configs", fname)
    if not ref.is_file():
        raise ConfigError(f"no shipped configuration named {name!r}")
    return Path(str(ref))


def list_packaged_configs() -> list:
    root = resources.files("chiralkerr").joinpath("configs")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def _read_json(path: Path) -> dict:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"configuration {path} is not valid JSON (line {exc.lineno}, column {exc.colno}): "
            f"{exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise ConfigError(f"configuration {path} must contain a JSON object")
    return data


def load_config(path, constants: PhysicalConstants = CODATA) -> ExperimentConfig:
    """Load, merge with defaults, unit-convert, and validate a configuration.

    ``path`` may be a filesystem path or the bare name of a shipped
    configuration (e.g. ``paper-fig2``).
    """
    p = Path(path)
    if not p.is_file():
        p = packaged_config_path(str(path))
    user = _strip_comments(_read_json(p))
    defaults = _strip_comments(_read_json(packaged_config_path(DEFAULTS_NAME)))

    provenance: dict = {}
    merged = _merge(defaults, user, "", provenance)
    merged = _convert_units(merged, "")
    return _build_config(merged, provenance, constants)


def _build_config(tree, provenance, constants) -> ExperimentConfig:
    density = tree["atom"].get("density_n0")
    temperature = _require_number(tree, "atom.temperature", 0.0, strict=True)
    if density is None:
        density = rb85_vapor_density(temperature, constants)
        provenance["atom.density_n0"] = "computed (vapor-pressure fit)"
    else:
        density = _require_number(tree, "atom.density_n0", 0.0, strict=True)

    try:
        atom = AtomParams(
            gamma21=_require_number(tree, "atom.gamma21", 0.0),
            gamma23=_require_number(tree, "atom.gamma23", 0.0),
            gamma41=_require_number(tree, "atom.gamma41", 0.0),
            gamma43=_require_number(tree, "atom.gamma43", 0.0),
            gamma31=_require_number(tree, "atom.gamma31", 0.0),
            gamma_transit=_require_number(tree, "atom.gamma_transit", 0.0, strict=True),
            mu23=_require_number(tree, "atom.mu23", 0.0, strict=True),
            density_n0=density,
            mass=_require_number(tree, "atom.mass", 0.0, strict=True),
            temperature=temperature,
        )
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc

    drives = {}
    for name in ("probe", "coupling", "switch"):
        prefix = f"drives.{name}"
        direction = _lookup(tree, f"{prefix}.direction")
        if direction not in (+1, -1):
            raise ConfigError(f"{prefix}.direction must be +1 or -1")
        drive = DriveSettings(
            power=_require_number(tree, f"{prefix}.power"),
            detuning=_require_number(tree, f"{prefix}.detuning"),
            diameter=_require_number(tree, f"{prefix}.diameter"),
            wavelength=_require_number(tree, f"{prefix}.wavelength"),
            dipole=_require_number(tree, f"{prefix}.dipole"),
            direction=int(direction),
            rabi_scale=_require_number(tree, f"{prefix}.rabi_scale"),
        )
        drive.validate(prefix)
        drives[name] = drive

    geometry = GeometrySettings(
        cell_length=_require_number(tree, "geometry.cell_length"),
        bs_theta=_require_number(tree, "geometry.bs_theta"),
        bs_phi=_require_number(tree, "geometry.bs_phi"),
        phi_l2=_require_number(tree, "geometry.phi_l2"),
    )
    geometry.validate()

    method = _lookup(tree, "quadrature.method")
    try:
        quadrature = QuadratureScheme(
            method=method,
            node_count=int(_require_number(tree, "quadrature.node_count", 1.0)),
            span=_require_number(tree, "quadrature.span"),
        )
    except ValidationError as exc:
        raise ConfigError(f"quadrature: {exc}") from exc

    sweep = SweepSettings(
        axis=_lookup(tree, "sweep.axis"),
        start=_require_number(tree, "sweep.start"),
        stop=_require_number(tree, "sweep.stop"),
        count=int(_require_number(tree, "sweep.count", 2.0)),
    )
    sweep.validate()

    return ExperimentConfig(
        atom=atom,
        probe=drives["probe"],
        coupling=drives["coupling"],
        switch=drives["switch"],
        geometry=geometry,
        quadrature=quadrature,
        sweep=sweep,
        provenance=provenance,
    )


def describe_resolved(config: ExperimentConfig,
                      constants: PhysicalConstants = CODATA) -> str:
    """Human-readable resolved parameter set (provenance audit for --verbose)."""
    two_pi_mhz = _TWO_PI_MHZ
    dist = config.velocity_distribution(constants)
    lines = ["resolved parameters (value [source]):"]

    def tag(path):
        return config.provenance.get(path, "default")

    a = config.atom
    for key, val in (
        ("gamma21", a.gamma21), ("gamma23", a.gamma23), ("gamma41", a.gamma41),
        ("gamma43", a.gamma43), ("gamma31", a.gamma31), ("gamma_transit", a.gamma_transit),
    ):
        lines.append(f"  atom.{key} = 2pi * {val / two_pi_mhz:.6g} MHz [{tag('atom.' + key)}]")
    lines.append(f"  atom.mu23 = {a.mu23:.6g} C m [{tag('atom.mu23')}]")
    lines.append(f"  atom.mass = {a.mass:.6g} kg [{tag('atom.mass')}]")
    lines.append(f"  atom.temperature = {a.temperature:.6g} K [{tag('atom.temperature')}]")
    lines.append(f"  atom.density_n0 = {a.density_n0:.6g} m^-3 [{tag('atom.density_n0')}]")
    lines.append(f"  velocity u = {dist.u:.6g} m/s [computed]")
    for name in ("probe", "coupling", "switch"):
        d: DriveSettings = getattr(config, name)
        prefix = f"drives.{name}"
        lines.append(f"  {prefix}.power = {d.power:.6g} W [{tag(prefix + '.power')}]")
        lines.append(
            f"  {prefix}.detuning = 2pi * {d.detuning / two_pi_mhz:.6g} MHz "
            f"[{tag(prefix + '.detuning')}]"
        )
        lines.append(f"  {prefix}.diameter = {d.diameter:.6g} m [{tag(prefix + '.diameter')}]")
        lines.append(
            f"  {prefix}.wavelength = {d.wavelength:.6g} m [{tag(prefix + '.wavelength')}]"
        )
        lines.append(f"  {prefix}.dipole = {d.dipole:.6g} C m [{tag(prefix + '.dipole')}]")
        lines.append(f"  {prefix}.direction = {d.direction:+d} [{tag(prefix + '.direction')}]")
        lines.append(
            f"  {prefix}.rabi_scale = {d.rabi_scale:.6g} [{tag(prefix + '.rabi_scale')}]"
        )
        lines.append(
            f"  {prefix} rabi = 2pi * {d.rabi(constants) / two_pi_mhz:.6g} MHz [computed]"
        )
    g = config.geometry
    lines.append(f"  geometry.cell_length = {g.cell_length:.6g} m [{tag('geometry.cell_length')}]")
    lines.append(f"  geometry.bs_theta = {g.bs_theta:.6g} rad [{tag('geometry.bs_theta')}]")
    lines.append(f"  geometry.bs_phi = {g.bs_phi:.6g} rad [{tag('geometry.bs_phi')}]")
    lines.append(f"  geometry.phi_l2 = {g.phi_l2:.6g} rad [{tag('geometry.phi_l2')}]")
    q = config.quadrature
    lines.append(f"  quadrature = {q.method}({q.node_count}), span {q.span} u "
                 f"[{tag('quadrature.method')}]")
    s = config.sweep
    lines.append(f"  sweep = {s.axis}: {s.start:.6g} .. {s.stop:.6g}, {s.count} points "
                 f"[{tag('sweep.axis')}]")
    return "\n".join(lines)
