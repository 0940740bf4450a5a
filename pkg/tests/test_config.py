"""Configuration loading and validation."""
import json

import pytest

from continuum_sim.config import AppConfig, load_config
from continuum_sim.errors import ConfigError


def test_defaults_load_without_file():
    cfg = load_config(None)
    geoms = cfg.manipulator_geometry()
    assert geoms.inner.s_min == 38.0
    assert cfg.plant.pretension_ref == 5.0
    assert cfg.dt == pytest.approx(0.01)


def test_missing_file_is_config_error():
    with pytest.raises(ConfigError):
        load_config("/no/such/config.json")


def test_invalid_json_is_config_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(p))


def test_nonpositive_hole_radius_rejected(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"geometry": {"inner": {
        "d": -1.0, "s_min": 38.0, "s_max": 162.0, "theta_max_deg": 75.0}}}))
    with pytest.raises(ConfigError, match="d must be positive"):
        load_config(str(p))


def test_kappa_d_domain_rejected(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"geometry": {"inner": {
        "kappa_max": 0.5, "s_min": 38.0, "s_max": 162.0, "theta_max_deg": 75.0}}}))
    with pytest.raises(ConfigError, match="inverse map domain"):
        load_config(str(p))


def test_partial_override_keeps_other_defaults(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"controller": {"kp": 0.8}}))
    cfg = load_config(str(p))
    assert cfg.controller.kp == 0.8
    assert cfg.controller.ki == 0.1
    assert cfg.geometry.outer.s_max == 182.0


def test_tick_rate_bounded_by_quasi_static_step(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"protocol": {"tick_hz": 50.0}}))
    with pytest.raises(ConfigError, match="10 ms"):
        load_config(str(p))


def test_stiffness_default_matches_tension_test():
    cfg = AppConfig()
    # 4 kg * 9.81 over 1.408% of 1125 mm
    assert cfg.plant.stiffness_ref == pytest.approx(39.24 / 15.84)
    assert cfg.plant.length_ref == 1125.0
    assert cfg.plant.tension_saturation == 65.0
