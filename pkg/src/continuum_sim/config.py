"""Declarative configuration: geometry, plant, controller and protocol settings.

One JSON document configures the whole gateway; every field has a default
matching the reference manipulator, so an empty file (or no file) is a
valid configuration.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from .controller import ControllerGains
from .errors import ConfigError, InvalidInput
from .geometry import SectionGeometry
from .multisection import ManipulatorGeometry
from .plant import PlantState, initial_state


class GeometrySection(BaseModel):
    n: int = 12
    d: float = 2.5
    h: float = 3.0
    s_min: float
    s_max: float
    theta_max_deg: float
    kappa_max: Optional[float] = None  # defaults to theta_max / s_min

    def build(self) -> SectionGeometry:
        theta = math.radians(self.theta_max_deg)
        kappa = self.kappa_max if self.kappa_max is not None else theta / self.s_min
        return SectionGeometry(
            n=self.n, d=self.d, h=self.h,
            s_min=self.s_min, s_max=self.s_max,
            kappa_max=kappa, theta_max=theta,
        )


class GeometryConfig(BaseModel):
    inner: GeometrySection = GeometrySection(s_min=38.0, s_max=162.0, theta_max_deg=75.0)
    middle: GeometrySection = GeometrySection(s_min=44.0, s_max=158.0, theta_max_deg=75.0)
    outer: GeometrySection = GeometrySection(s_min=78.0, s_max=182.0, theta_max_deg=85.0)
    total_min: float = 160.0
    total_max: float = 502.0


class PlantConfig(BaseModel):
    # 4 kg at 1.408% elongation of a 1125 mm tendon: 39.24 N / 15.84 mm
    stiffness_ref: float = 39.24 / 15.84
    length_ref: float = 1125.0
    pretension_ref: float = 5.0
    tension_baseline: float = 0.0
    tension_saturation: float = 65.0


class ControllerConfig(BaseModel):
    kp: float = 0.5
    ki: float = 0.1
    kd: float = 0.01
    integral_clamp: float = 20.0
    velocity_clamp: float = 50.0
    derivative_tau: float = 0.05
    strict_limits: bool = False


class ProtocolConfig(BaseModel):
    tick_hz: float = 100.0
    broadcast_hz: float = 30.0
    watchdog_s: float = 0.5
    polyline_samples: int = Field(default=9, ge=2)
    group_offset_deg: float = 40.0


class AppConfig(BaseModel):
    geometry: GeometryConfig = GeometryConfig()
    plant: PlantConfig = PlantConfig()
    controller: ControllerConfig = ControllerConfig()
    protocol: ProtocolConfig = ProtocolConfig()

    @property
    def dt(self) -> float:
        return 1.0 / self.protocol.tick_hz

    def manipulator_geometry(self) -> ManipulatorGeometry:
        geoms = ManipulatorGeometry(
            inner=self.geometry.inner.build(),
            middle=self.geometry.middle.build(),
            outer=self.geometry.outer.build(),
            total_min=self.geometry.total_min,
            total_max=self.geometry.total_max,
        )
        geoms.validate()
        return geoms

    def controller_gains(self) -> ControllerGains:
        c = self.controller
        return ControllerGains(
            kp=c.kp, ki=c.ki, kd=c.kd,
            f_ref=np.full(9, self.plant.pretension_ref),
            integral_clamp=c.integral_clamp,
            velocity_clamp=c.velocity_clamp,
            derivative_tau=c.derivative_tau,
            strict_limits=c.strict_limits,
        )

    def initial_plant(self) -> PlantState:
        p = self.plant
        return initial_state(
            self.manipulator_geometry(),
            stiffness_ref=p.stiffness_ref,
            length_ref=p.length_ref,
            pretension_ref=p.pretension_ref,
            tension_baseline=p.tension_baseline,
            saturation=p.tension_saturation,
        )


def load_config(path: Optional[str] = None) -> AppConfig:
    """Load and validate a configuration file; defaults when path is None."""
    if path is None:
        cfg = AppConfig()
    else:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"configuration file not found: {path}")
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"configuration is not valid JSON: {exc}") from exc
        try:
            cfg = AppConfig.model_validate(data)
        except ValidationError as exc:
            raise ConfigError(f"configuration is invalid: {exc}") from exc
    try:
        cfg.manipulator_geometry()
    except InvalidInput as exc:
        raise ConfigError(f"geometry is invalid: {exc}") from exc
    if cfg.plant.stiffness_ref <= 0 or cfg.plant.length_ref <= 0:
        raise ConfigError("plant stiffness and reference length must be positive")
    if cfg.plant.pretension_ref < 0:
        raise ConfigError("pretension must be non-negative")
    if cfg.protocol.tick_hz <= 0 or cfg.protocol.broadcast_hz <= 0:
        raise ConfigError("tick and broadcast rates must be positive")
    if cfg.dt > 0.010 + 1e-12:
        raise ConfigError("tick period must not exceed the 10 ms quasi-static bound")
    return cfg
