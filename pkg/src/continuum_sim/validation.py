"""Self-check suites: round trips, oracle agreement, Jacobian correctness.

These run the same checks as the test suite but from the CLI, at
configurable sample counts, printing one line per suite with the
measured worst error against its tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from .config import AppConfig
from .geometry import EPS_STRAIGHT, SectionConfig, SectionGeometry
from .kinematics import (
    chord_oracle,
    forward_section,
    inverse_section,
    rotated_inverse,
    section_jacobian_inverse,
)
from .multisection import (
    GROUP_OFFSET,
    ManipulatorConfig,
    ManipulatorGeometry,
    compose_actuator,
    forward_decouple,
    jacobian_inverse,
)


@dataclass
class SuiteResult:
    name: str
    max_error: float
    tolerance: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.max_error < self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] {self.name}: max error {self.max_error:.3e} "
            f"(tolerance {self.tolerance:.1e}, {self.samples} samples)"
        )


def sample_section_config(rng: np.random.Generator, geom: SectionGeometry) -> SectionConfig:
    """Uniform in-limit sample: s over its range, bend angle up to the limit."""
    s = rng.uniform(geom.s_min, geom.s_max)
    theta = rng.uniform(0.0, geom.theta_max)
    kappa = min(theta / s, geom.kappa_max)
    phi = rng.uniform(-math.pi, math.pi)
    return SectionConfig(kappa=kappa, phi=phi, s=s)


def sample_manipulator_config(
    rng: np.random.Generator, geoms: ManipulatorGeometry
) -> ManipulatorConfig:
    return ManipulatorConfig(
        sample_section_config(rng, geoms.inner),
        sample_section_config(rng, geoms.middle),
        sample_section_config(rng, geoms.outer),
    )


def _phi_diff(a: float, b: float) -> float:
    return abs(math.remainder(a - b, 2.0 * math.pi))


def roundtrip_suite(geoms: ManipulatorGeometry, samples: int, seed: int = 0) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    per_section = max(1, samples // 3)
    for geom in geoms.sections():
        for _ in range(per_section):
            cfg = sample_section_config(rng, geom)
            back = forward_section(inverse_section(cfg, geom), geom)
            worst = max(worst, abs(back.kappa - cfg.kappa), abs(back.s - cfg.s))
            if cfg.kappa > EPS_STRAIGHT:
                worst = max(worst, _phi_diff(back.phi, cfg.phi))
    return SuiteResult("kinematic round trip", worst, 1e-9, per_section * 3)


def oracle_suite(geoms: ManipulatorGeometry, samples: int, seed: int = 1) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    per_section = max(1, samples // 3)
    for geom in geoms.sections():
        for _ in range(per_section):
            cfg = sample_section_config(rng, geom)
            offset = rng.choice([0.0, GROUP_OFFSET, 2.0 * GROUP_OFFSET])
            analytic = rotated_inverse(cfg, geom, offset).as_array()
            truth = chord_oracle(cfg, geom, offset).as_array()
            worst = max(worst, float(np.abs(analytic - truth).max()))
    return SuiteResult("chord oracle agreement", worst, 1e-6, per_section * 3)


def multisection_oracle_suite(
    geoms: ManipulatorGeometry, samples: int, seed: int = 2
) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        config = sample_manipulator_config(rng, geoms)
        actuator, _ = compose_actuator(config, geoms)
        truth = np.concatenate(
            [
                chord_oracle(config.inner, geoms.inner, 2 * GROUP_OFFSET).as_array()
                + chord_oracle(config.middle, geoms.middle, GROUP_OFFSET).as_array()
                + chord_oracle(config.outer, geoms.outer, 0.0).as_array(),
                chord_oracle(config.inner, geoms.inner, GROUP_OFFSET).as_array()
                + chord_oracle(config.middle, geoms.middle, 0.0).as_array(),
                chord_oracle(config.inner, geoms.inner, 0.0).as_array(),
            ]
        )
        worst = max(worst, float(np.abs(actuator.lengths - truth).max()))
    return SuiteResult("three-arc chained oracle", worst, 1e-6, samples)


def decouple_roundtrip_suite(
    geoms: ManipulatorGeometry, samples: int, seed: int = 3
) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        config = sample_manipulator_config(rng, geoms)
        actuator, _ = compose_actuator(config, geoms)
        back, _ = forward_decouple(actuator, geoms)
        diff = np.abs(back.as_vector() - config.as_vector())
        for j in range(3):
            if config.as_vector()[3 * j] <= EPS_STRAIGHT:
                diff[3 * j + 1] = 0.0
            else:
                diff[3 * j + 1] = _phi_diff(back.as_vector()[3 * j + 1], config.as_vector()[3 * j + 1])
        worst = max(worst, float(diff.max()))
    return SuiteResult("composition round trip", worst, 1e-9, samples)


def _fd_interior(cfg: SectionConfig, floor: float = 1e-5) -> SectionConfig:
    # central stencils need interior kappa; the straight limit is covered
    # by the exact column identities, not by differencing
    from dataclasses import replace

    return replace(cfg, kappa=max(cfg.kappa, floor))


def section_jacobian_suite(
    geoms: ManipulatorGeometry, samples: int, seed: int = 4
) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    per_section = max(1, samples // 3)
    for geom in geoms.sections():
        for _ in range(per_section):
            cfg = _fd_interior(sample_section_config(rng, geom))
            offset = rng.choice([0.0, GROUP_OFFSET, 2.0 * GROUP_OFFSET])
            jac = section_jacobian_inverse(cfg, geom, offset)
            fd = _finite_difference_section(cfg, geom, offset)
            rel = np.abs(jac - fd) / (1.0 + np.abs(fd))
            worst = max(worst, float(rel.max()))
    return SuiteResult("section Jacobian vs finite differences", worst, 1e-6, per_section * 3)


def _finite_difference_section(
    cfg: SectionConfig, geom: SectionGeometry, offset: float
) -> np.ndarray:
    base = np.array([cfg.kappa, cfg.phi, cfg.s])
    steps = np.array([1e-6, 1e-6, 1e-6]) * np.maximum(1.0, np.abs(base))
    fd = np.zeros((3, 3))
    for j in range(3):
        hi, lo = base.copy(), base.copy()
        hi[j] += steps[j]
        lo[j] -= steps[j]
        if j == 0 and lo[0] < 0.0:
            lo[0] = 0.0  # kappa is non-negative; fall back to forward difference
            l_hi = rotated_inverse(SectionConfig(*hi), geom, offset).as_array()
            l_lo = rotated_inverse(SectionConfig(*lo), geom, offset).as_array()
            fd[:, j] = (l_hi - l_lo) / (hi[0] - lo[0])
            continue
        l_hi = rotated_inverse(SectionConfig(*hi), geom, offset).as_array()
        l_lo = rotated_inverse(SectionConfig(*lo), geom, offset).as_array()
        fd[:, j] = (l_hi - l_lo) / (2.0 * steps[j])
    return fd


def multisection_jacobian_suite(
    geoms: ManipulatorGeometry, samples: int, seed: int = 5
) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        config = sample_manipulator_config(rng, geoms)
        config = ManipulatorConfig(
            _fd_interior(config.inner), _fd_interior(config.middle), _fd_interior(config.outer)
        )
        jac = jacobian_inverse(config, geoms)
        zeros = max(
            float(np.abs(jac[3:6, 6:9]).max()),
            float(np.abs(jac[6:9, 3:6]).max()),
            float(np.abs(jac[6:9, 6:9]).max()),
        )
        if zeros != 0.0:
            worst = max(worst, 1.0)
        fd = _finite_difference_multi(config, geoms)
        rel = np.abs(jac - fd) / (1.0 + np.abs(fd))
        worst = max(worst, float(rel.max()))
    return SuiteResult("9x9 Jacobian vs finite differences", worst, 1e-6, samples)


def _finite_difference_multi(config: ManipulatorConfig, geoms: ManipulatorGeometry) -> np.ndarray:
    vec = config.as_vector()
    fd = np.zeros((9, 9))
    for j in range(9):
        step = 1e-6 * max(1.0, abs(vec[j]))
        hi, lo = vec.copy(), vec.copy()
        hi[j] += step
        lo[j] -= step
        if j % 3 == 0 and lo[j] < 0.0:
            lo[j] = 0.0
        a, _ = compose_actuator(ManipulatorConfig.from_vector(hi), geoms)
        b, _ = compose_actuator(ManipulatorConfig.from_vector(lo), geoms)
        fd[:, j] = (a.lengths - b.lengths) / (hi[j] - lo[j])
    return fd


def run_all(cfg: AppConfig, samples: int = 1000, jacobian_samples: int = 100) -> List[SuiteResult]:
    geoms = cfg.manipulator_geometry()
    return [
        roundtrip_suite(geoms, samples),
        oracle_suite(geoms, samples),
        decouple_roundtrip_suite(geoms, max(1, samples // 3)),
        multisection_oracle_suite(geoms, max(1, samples // 10)),
        section_jacobian_suite(geoms, jacobian_samples * 3),
        multisection_jacobian_suite(geoms, jacobian_samples),
    ]
