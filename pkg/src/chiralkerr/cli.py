"""Command-line interface.

Subcommands: spectrum, isolation-sweep, switch-sweep, phase-sweep,
calibrate-circulator. Exit codes: 0 success, 2 configuration or validation
error, 3 numerical error, 4 I/O error.
"""

import argparse
import json
import math
import sys

from . import __version__
from .atom import flip_probe
from .config import describe_resolved, list_packaged_configs, load_config
from .doppler import spectrum as chi_spectrum
from .errors import NumericalError, ValidationError
from .output import emit, render_csv
from .sagnac import PORTS, calibrate_operating_point
from .sweeps import (run_isolation_sweep, run_phase_sweep, run_spectrum,
                     run_switch_detuning_sweep)

_SWEEP_COMMANDS = {
    "spectrum": run_spectrum,
    "isolation-sweep": run_isolation_sweep,
    "switch-sweep": run_switch_detuning_sweep,
    "phase-sweep": run_phase_sweep,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiralkerr",
        description="Chiral cross-Kerr isolator/circulator simulator for Rb vapor "
                    "in a two-path Sagnac interferometer.",
        epilog=f"shipped configurations: {', '.join(list_packaged_configs())}",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", required=True,
                        help="configuration file path or shipped configuration name")
    shared.add_argument("--out", default=None, help="output file (stdout if omitted)")
    shared.add_argument("--format", choices=("csv", "svg"), default="csv")
    shared.add_argument("--threads", type=int, default=1,
                        help="worker processes for sweep points (default 1)")
    shared.add_argument("--verbose", action="store_true",
                        help="echo the fully resolved parameter set with provenance")

    sub = parser.add_subparsers(dest="command", required=True)
    help_text = {
        "spectrum": "co/counter transmission spectrum vs probe detuning",
        "isolation-sweep": "on-resonance isolator metrics vs switch power",
        "switch-sweep": "on-resonance transmission vs switch detuning",
        "phase-sweep": "interferometer fringes vs probe detuning",
    }
    for name, runner in _SWEEP_COMMANDS.items():
        cmd = sub.add_parser(name, parents=[shared], help=help_text[name])
        cmd.set_defaults(func=_run_sweep_command, runner=runner)
    cal = sub.add_parser("calibrate-circulator", parents=[shared],
                         help="grid-search the circulator operating point "
                              "(writes a JSON report to --out; --format is ignored)")
    cal.add_argument("--phi-count", type=int, default=720,
                     help="phi_L2 grid resolution (default 720)")
    cal.set_defaults(func=_run_calibrate)
    return parser


def _load(args):
    config = load_config(args.config)
    if args.verbose:
        print(describe_resolved(config))
    return config


def _run_sweep_command(args) -> None:
    config = _load(args)
    result = args.runner(config, workers=max(1, args.threads))
    if args.out is None:
        if args.format != "csv":
            raise ValidationError("--out is required for svg output")
        sys.stdout.write(render_csv(result))
    else:
        emit(result, args.format, args.out)


def _run_calibrate(args) -> None:
    config = _load(args)
    if config.sweep.axis != "probe_detuning":
        raise ValidationError("calibrate-circulator needs a probe_detuning sweep grid")
    grid = config.sweep.grid()
    drives = config.drive_configuration()
    spec_plus = chi_spectrum(drives, config.atom, config.quadrature, grid)
    spec_minus = chi_spectrum(flip_probe(drives), config.atom, config.quadrature, grid)
    result = calibrate_operating_point(
        spec_plus, spec_minus, config.device_template(),
        k_p=config.probe.wavevector, phi_count=args.phi_count,
    )

    two_pi_mhz = 2.0 * math.pi * 1e6
    print(f"operating point: probe detuning = 2pi * {result.detuning / two_pi_mhz:.6g} MHz, "
          f"phi_L2 = {result.phi_l2:.6g} rad")
    print(f"minimum route contrast: {result.min_route_contrast:.6g}"
          + (" [reciprocity-limited]" if result.reciprocity_limited else ""))
    for (src, dst), value in result.route_contrasts.items():
        print(f"  {src} -> {dst}: contrast {value:.6g}")

    if args.out is not None:
        text = json.dumps(
            {
                "detuning_rad_s": result.detuning,
                "phi_l2_rad": result.phi_l2,
                "min_route_contrast": result.min_route_contrast,
                "reciprocity_limited": result.reciprocity_limited,
                "route_contrasts": {f"{s}->{d}": v
                                    for (s, d), v in result.route_contrasts.items()},
                "routing": {src: result.routing.fractions[src] for src in PORTS},
            },
            indent=2,
        ) + "\n"
        with open(args.out, "w") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
