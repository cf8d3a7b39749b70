import json
import math

import pytest

from chiralkerr import ConfigError, load_config, rb85_vapor_density
from chiralkerr.config import describe_resolved, list_packaged_configs, packaged_config_path

TWO_PI_MHZ = 2 * math.pi * 1e6


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


class TestLoadConfig:
    def test_minimal_file_applies_defaults(self, tmp_path):
        cfg = load_config(write_config(tmp_path, {"atom": {"temperature": 295.0}}))
        assert cfg.atom.temperature == 295.0
        assert cfg.atom.gamma21 == pytest.approx(2.875 * TWO_PI_MHZ)
        assert cfg.atom.gamma_transit == pytest.approx(0.01 * TWO_PI_MHZ)
        assert cfg.probe.diameter == 2e-3
        assert cfg.coupling.power == 0.012
        assert cfg.switch.power == 0.0
        assert cfg.geometry.cell_length == 0.1
        assert cfg.quadrature.method == "gauss-hermite"
        assert cfg.quadrature.node_count == 64
        # density recomputed from the vapor fit at the configured temperature
        assert cfg.atom.density_n0 == pytest.approx(rb85_vapor_density(295.0), rel=1e-12)
        assert cfg.provenance["atom.temperature"] == "config"
        assert cfg.provenance["atom.gamma21"] == "default"
        assert "computed" in cfg.provenance["atom.density_n0"]

    def test_negative_power_names_key(self, tmp_path):
        path = write_config(tmp_path, {"drives": {"probe": {"power": -1e-6}}})
        with pytest.raises(ConfigError, match="drives.probe.power"):
            load_config(path)

    def test_shipped_fig2_matches_experiment_values(self):
        cfg = load_config("paper-fig2")
        assert cfg.probe.power == pytest.approx(7.5e-6)
        assert cfg.coupling.power == pytest.approx(0.012)
        assert cfg.switch.power == pytest.approx(0.021)
        assert cfg.atom.temperature == pytest.approx(311.15)  # 38 C
        assert cfg.probe.diameter == pytest.approx(2e-3)
        assert cfg.geometry.cell_length == pytest.approx(0.1)
        assert cfg.sweep.axis == "switch_power"

    def test_mhz_shorthand(self, tmp_path):
        path = write_config(tmp_path, {"drives": {"probe": {"detuning": {"MHz_2pi": -3.5}}}})
        cfg = load_config(path)
        assert cfg.probe.detuning == pytest.approx(-3.5 * TWO_PI_MHZ)

    def test_underscore_keys_ignored(self, tmp_path):
        path = write_config(tmp_path, {"_note": "hello", "atom": {"_x": 1, "temperature": 300.0}})
        assert load_config(path).atom.temperature == 300.0

    def test_unknown_key_rejected(self, tmp_path):
        path = write_config(tmp_path, {"atom": {"temprature": 300.0}})
        with pytest.raises(ConfigError, match="atom.temprature"):
            load_config(path)

    def test_bad_json_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"atom": {\n  "temperature": oops\n}}')
        with pytest.raises(ConfigError, match="line 2"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.json")

    def test_explicit_density_override(self, tmp_path):
        path = write_config(tmp_path, {"atom": {"density_n0": 5e16}})
        assert load_config(path).atom.density_n0 == 5e16

    def test_bad_sweep_axis(self, tmp_path):
        path = write_config(tmp_path, {"sweep": {"axis": "coupling_power"}})
        with pytest.raises(ConfigError, match="sweep.axis"):
            load_config(path)

    def test_sweep_count_minimum(self, tmp_path):
        path = write_config(tmp_path, {"sweep": {"count": 1}})
        with pytest.raises(ConfigError, match="sweep.count"):
            load_config(path)


class TestVaporDensity:
    def test_reference_scale_at_38C(self):
        n = rb85_vapor_density(311.15)
        assert 2.0e16 < n < 3.0e16

    def test_monotone_in_temperature(self):
        assert rb85_vapor_density(333.15) > rb85_vapor_density(311.15) > rb85_vapor_density(295.0)


class TestPackagedConfigs:
    def test_all_figures_shipped(self):
        names = list_packaged_configs()
        for name in ("rb85-defaults", "paper-fig1c", "paper-fig2", "paper-fig2d",
                     "paper-fig3", "circulator-cal"):
            assert name in names
            assert packaged_config_path(name).is_file()

    def test_every_shipped_config_loads(self):
        for name in list_packaged_configs():
            cfg = load_config(name)
            assert cfg.atom.density_n0 > 0

    def test_describe_resolved_reports_provenance(self):
        cfg = load_config("paper-fig2")
        text = describe_resolved(cfg)
        assert "rabi" in text
        assert "[config]" in text and "[default]" in text and "[computed]" in text
        assert "drives.probe.power" in text


class TestConversions:
    def test_drive_configuration_rabi_from_power(self):
        cfg = load_config("paper-fig2")
        drives = cfg.drive_configuration()
        # 12 mW coupling over a 2 mm beam on the D1 dipole
        assert drives.coupling.rabi == pytest.approx(64.95 * TWO_PI_MHZ, rel=1e-3)
        # probe carries the 0.15 calibration scale
        assert drives.probe.rabi == pytest.approx(0.15 * 1.6238 * TWO_PI_MHZ, rel=1e-3)
        assert drives.switch.rabi == pytest.approx(121.39 * TWO_PI_MHZ, rel=1e-3)
        assert drives.is_copropagating

    def test_device_template(self):
        cfg = load_config("paper-fig3")
        device = cfg.device_template()
        assert device.cell_length == pytest.approx(0.1)
        assert device.arm_l2.phase == cfg.geometry.phi_l2
