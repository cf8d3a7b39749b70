import json
import math
import xml.etree.ElementTree as ET

import pytest

from chiralkerr import ValidationError, load_config
from chiralkerr.cli import main
from chiralkerr.output import emit, read_csv, render_csv
from chiralkerr.sweeps import (SweepResult, SweepRow, run_isolation_sweep, run_phase_sweep,
                               run_phi_l2_sweep, run_spectrum, run_switch_detuning_sweep)

TWO_PI_MHZ = 2 * math.pi * 1e6


def tiny_config(tmp_path, **overrides):
    """A fast configuration: coarse quadrature, short grid, weak drives."""
    payload = {
        "atom": {"temperature": 311.15},
        "drives": {
            "probe": {"power": 1e-9},
            "coupling": {"power": 0.004},
        },
        "quadrature": {"method": "gauss-hermite", "node_count": 16},
        "sweep": {"axis": "probe_detuning", "start": {"MHz_2pi": -10.0},
                  "stop": {"MHz_2pi": 10.0}, "count": 5},
    }
    for key, val in overrides.items():
        section = payload.setdefault(key, {})
        if isinstance(val, dict):
            section.update(val)
        else:
            payload[key] = val
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(payload))
    return path


class TestRunners:
    def test_axis_mismatch_fails_fast(self, tmp_path):
        cfg = load_config(tiny_config(tmp_path))
        with pytest.raises(ValidationError, match="axis"):
            run_isolation_sweep(cfg)

    def test_spectrum_rows(self, tmp_path):
        cfg = load_config(tiny_config(tmp_path))
        result = run_spectrum(cfg)
        assert result.axis == "probe_detuning"
        assert len(result.rows) == 5
        axis = [r.axis_value for r in result.rows]
        assert axis == sorted(axis)
        for row in result.rows:
            assert 0.0 <= row.t_co <= 1.0
            assert 0.0 <= row.t_cou <= 1.0
            assert 0.0 <= row.p2_intensity <= 1.0
            assert row.delta_phi == pytest.approx(row.phase_co - cfg.geometry.phi_l2)

    def test_switch_sweeps_force_probe_resonance(self, tmp_path):
        cfg = load_config(tiny_config(
            tmp_path,
            drives={"probe": {"power": 1e-9, "detuning": {"MHz_2pi": 5.0}}},
            sweep={"axis": "switch_detuning", "start": {"MHz_2pi": -20.0},
                   "stop": {"MHz_2pi": 20.0}, "count": 3},
        ))
        result = run_switch_detuning_sweep(cfg)
        assert len(result.rows) == 3
        # symmetric sweep of an otherwise resonant configuration: T even in ds
        assert result.rows[0].t_co == pytest.approx(result.rows[2].t_co, rel=1e-6)

    def test_phase_sweep_phi_l2_offsets_swap_ports(self, tmp_path):
        cfg0 = load_config(tiny_config(tmp_path, geometry={"phi_l2": 0.0}))
        cfg_pi = load_config(tiny_config(tmp_path, geometry={"phi_l2": math.pi}))
        r0 = run_phase_sweep(cfg0)
        rpi = run_phase_sweep(cfg_pi)
        for a, b in zip(r0.rows, rpi.rows):
            assert a.p2_intensity == pytest.approx(b.p4_intensity, abs=1e-12)
            assert a.p4_intensity == pytest.approx(b.p2_intensity, abs=1e-12)

    def test_flat_arms_give_constant_phase_difference(self, tmp_path):
        # negligible density: both arms transparent and dispersionless
        cfg = load_config(tiny_config(tmp_path, atom={"temperature": 311.15,
                                                      "density_n0": 1.0}))
        result = run_phase_sweep(cfg)
        dphi = [r.delta_phi for r in result.rows]
        assert max(dphi) - min(dphi) < 1e-12
        assert all(r.t_co == pytest.approx(1.0, abs=1e-12) for r in result.rows)

    def test_phi_l2_sweep(self, tmp_path):
        cfg = load_config(tiny_config(
            tmp_path,
            sweep={"axis": "phi_l2", "start": 0.0, "stop": 2 * math.pi, "count": 9},
        ))
        result = run_phi_l2_sweep(cfg)
        assert result.axis == "phi_l2"
        # medium identical in every row; only the fringe columns vary
        t_values = {r.t_co for r in result.rows}
        assert len(t_values) == 1
        p2 = [r.p2_intensity for r in result.rows]
        assert max(p2) - min(p2) > 0.1

    def test_workers_do_not_change_results(self, tmp_path):
        cfg = load_config(tiny_config(tmp_path))
        serial = run_spectrum(cfg, workers=1)
        parallel = run_spectrum(cfg, workers=2)
        assert render_csv(serial) == render_csv(parallel)


class TestOutput:
    def _result(self):
        rows = (
            SweepRow(1.0, 0.5, 0.005, 20.0, 0.1, -0.2, 0.1, 0.7, 0.1),
            SweepRow(2.0, 0.25, 0.0, math.inf, -0.3, 0.0, -0.3, 0.2, 0.6),
        )
        return SweepResult(axis="probe_detuning", rows=rows)

    def test_csv_header_and_digits(self):
        text = render_csv(self._result())
        lines = text.strip().split("\n")
        assert lines[0] == ("axis,T_co,T_cou,isolation_dB,phase_co_rad,"
                            "phase_counter_rad,delta_phi_rad,p2_intensity,p4_intensity")
        assert lines[1].startswith("1,0.5,0.005,20,")
        assert "inf" in lines[2]

    def test_empty_result_is_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit(SweepResult(axis="x", rows=()), "csv", path)
        assert path.read_text().strip() == ",".join(SweepResult.columns)

    def test_round_trip(self, tmp_path):
        path = tmp_path / "out.csv"
        result = self._result()
        emit(result, "csv", path)
        back = read_csv(path)
        for a, b in zip(result.rows, back.rows):
            for x, y in zip(a.as_tuple(), b.as_tuple()):
                if math.isfinite(x):
                    assert y == pytest.approx(x, rel=1e-8)
                else:
                    assert x == y

    def test_csv_round_trip_through_real_sweep(self, tmp_path):
        cfg = load_config(tiny_config(tmp_path))
        result = run_spectrum(cfg)
        path = tmp_path / "spec.csv"
        emit(result, "csv", path)
        back = read_csv(path)
        for a, b in zip(result.rows, back.rows):
            assert b.t_co == pytest.approx(a.t_co, rel=1e-8)
            assert b.axis_value == pytest.approx(a.axis_value, rel=1e-8)

    def test_svg_well_formed(self, tmp_path):
        path = tmp_path / "plot.svg"
        emit(self._result(), "svg", path)
        root = ET.parse(path).getroot()
        assert root.tag.endswith("svg")
        emit(SweepResult(axis="x", rows=()), "svg", path)
        ET.parse(path)

    def test_unknown_format(self):
        with pytest.raises(ValidationError):
            emit(self._result(), "pdf", "/tmp/x.pdf")

    def test_read_csv_rejects_foreign_files(self, tmp_path):
        path = tmp_path / "foreign.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValidationError):
            read_csv(path)


class TestDeterminism:
    def test_identical_config_bit_identical_csv(self, tmp_path):
        cfg_path = tiny_config(tmp_path)
        first = render_csv(run_spectrum(load_config(cfg_path)))
        second = render_csv(run_spectrum(load_config(cfg_path)))
        assert first == second


class TestShippedPresets:
    def test_passive_on_resonance(self):
        # the medium must stay passive (no gain) at probe resonance for every
        # shipped preset, in both propagation directions
        from chiralkerr import chi_doppler_averaged, flip_probe
        from dataclasses import replace
        for name in ("rb85-defaults", "paper-fig1c", "paper-fig2", "paper-fig3",
                     "circulator-cal"):
            cfg = load_config(name)
            drives = cfg.drive_configuration()
            drives = replace(drives, probe=replace(drives.probe, detuning=0.0))
            for d in (drives, flip_probe(drives)):
                chi = chi_doppler_averaged(d, cfg.atom, cfg.quadrature)
                assert chi.value.imag >= -1e-12, (name, d.label)

    def test_switch_off_spectrum_shows_transparency_window(self):
        # with the switch off, the spectrum of the fig-1c preset carries a
        # plain two-photon transparency window at the coupling offset
        from dataclasses import replace
        import numpy as np
        cfg = load_config("paper-fig1c")
        cfg = replace(cfg, switch=replace(cfg.switch, power=0.0))
        grid = np.linspace(-30, 30, 21) * TWO_PI_MHZ
        from chiralkerr import chi_doppler_averaged
        from chiralkerr.sagnac import transmission
        t = []
        for dp in grid:
            drives = cfg.drive_configuration()
            drives = replace(drives, probe=replace(drives.probe, detuning=float(dp)))
            t.append(transmission(chi_doppler_averaged(drives, cfg.atom, cfg.quadrature),
                                  cfg.probe.wavevector, cfg.geometry.cell_length))
        peak = int(np.argmax(t))
        assert t[peak] > 0.3                       # window transmits
        assert abs(grid[peak] - cfg.coupling.detuning) < 5 * TWO_PI_MHZ
        assert t[0] < 0.05 and t[-1] < 0.05        # opaque outside the window


class TestCli:
    def test_spectrum_to_csv(self, tmp_path, capsys):
        cfg = tiny_config(tmp_path)
        out = tmp_path / "spec.csv"
        assert main(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
        assert out.read_text().startswith("axis,")

    def test_verbose_prints_resolved_parameters(self, tmp_path, capsys):
        cfg = tiny_config(tmp_path)
        out = tmp_path / "spec.csv"
        assert main(["spectrum", "--config", str(cfg), "--out", str(out), "--verbose"]) == 0
        text = capsys.readouterr().out
        assert "resolved parameters" in text
        assert "rabi" in text

    def test_stdout_csv_when_no_out(self, tmp_path, capsys):
        cfg = tiny_config(tmp_path)
        assert main(["spectrum", "--config", str(cfg)]) == 0
        assert capsys.readouterr().out.startswith("axis,")

    def test_config_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        assert main(["spectrum", "--config", str(bad)]) == 2

    def test_axis_mismatch_exit_code(self, tmp_path, capsys):
        cfg = tiny_config(tmp_path)
        assert main(["isolation-sweep", "--config", str(cfg)]) == 2

    def test_io_error_exit_code(self, tmp_path, capsys):
        cfg = tiny_config(tmp_path)
        missing_dir = tmp_path / "no_such_dir" / "out.csv"
        assert main(["spectrum", "--config", str(cfg), "--out", str(missing_dir)]) == 4

    def test_numerical_error_exit_code(self, tmp_path, capsys):
        # switch resonantly pumping a detuned-coupling medium drives it into
        # gain; the physics guard maps to exit code 3
        payload = {
            "atom": {"gamma31": {"MHz_2pi": 0.3}},
            "drives": {
                "probe": {"power": 7.5e-6, "rabi_scale": 0.15},
                "coupling": {"power": 0.012, "detuning": {"MHz_2pi": 12.0}},
                "switch": {"power": 0.021},
            },
            "quadrature": {"method": "gauss-hermite", "node_count": 32},
            "sweep": {"axis": "switch_detuning", "start": {"MHz_2pi": -20.0},
                      "stop": {"MHz_2pi": 20.0}, "count": 3},
        }
        cfg = tmp_path / "gain.json"
        cfg.write_text(json.dumps(payload))
        assert main(["switch-sweep", "--config", str(cfg)]) == 3
        assert "gain" in capsys.readouterr().err

    def test_calibrate_runs_on_small_grid(self, tmp_path, capsys):
        payload = {
            "atom": {"temperature": 311.15},
            "drives": {"probe": {"power": 1e-9}, "coupling": {"power": 0.004}},
            "quadrature": {"method": "gauss-hermite", "node_count": 16},
            "sweep": {"axis": "probe_detuning", "start": {"MHz_2pi": -5.0},
                      "stop": {"MHz_2pi": 5.0}, "count": 5},
        }
        cfg = tmp_path / "cal.json"
        cfg.write_text(json.dumps(payload))
        out = tmp_path / "cal.json.out"
        assert main(["calibrate-circulator", "--config", str(cfg), "--out", str(out),
                     "--phi-count", "90"]) == 0
        report = json.loads(out.read_text())
        assert "min_route_contrast" in report and "routing" in report
        assert "operating point" in capsys.readouterr().out

    def test_svg_output(self, tmp_path):
        cfg = tiny_config(tmp_path)
        out = tmp_path / "plot.svg"
        assert main(["spectrum", "--config", str(cfg), "--out", str(out),
                     "--format", "svg"]) == 0
        ET.parse(out)
