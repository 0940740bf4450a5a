"""Single-section kinematics: analytic maps against the 3D chord oracle."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from continuum_sim.errors import DomainError, InvalidInput, LimitViolation
from continuum_sim.geometry import (
    EPS_STRAIGHT,
    GROUP_OFFSET,
    Pose,
    SectionConfig,
    SectionGeometry,
    TendonLengths,
)
from continuum_sim.kinematics import (
    chord_oracle,
    config_to_poses,
    disk_frames,
    forward_section,
    inverse_section,
    rotated_inverse,
    section_jacobian_inverse,
)

TWO_THIRDS_PI = 2.0 * math.pi / 3.0


def in_limit_config(geom, kappa_frac, phi, s_frac):
    s = geom.s_min + s_frac * (geom.s_max - geom.s_min)
    theta = kappa_frac * geom.theta_max
    return SectionConfig(kappa=theta / s, phi=phi, s=s)


# --- forward map ---------------------------------------------------------


def test_forward_straight_triple(g10):
    cfg = forward_section(TendonLengths(130.0, 130.0, 130.0), g10)
    assert cfg.kappa == 0.0
    assert cfg.phi == 0.0
    assert cfg.s == pytest.approx(100.0, abs=1e-12)


def test_forward_recovers_oracle_lengths(g10):
    # lengths produced by the chord construction at (0.005, 0, 100)
    lengths = TendonLengths(129.98958365884934, 128.90716466431945, 131.07200265337923)
    cfg = forward_section(lengths, g10)
    assert cfg.kappa == pytest.approx(0.005, abs=1e-9)
    assert cfg.phi == pytest.approx(0.0, abs=1e-9)
    assert cfg.s == pytest.approx(100.0, abs=1e-9)


def test_forward_rejects_short_tendon(g10):
    with pytest.raises(InvalidInput):
        forward_section(TendonLengths(29.9, 130.0, 130.0), g10)


def test_forward_rejects_unrealizable_asymmetry(g10):
    # l_m beyond 3*n*d cannot come from any arc
    with pytest.raises(DomainError):
        forward_section(TendonLengths(400.0, 100.0, 100.0), g10)


# --- inverse map ---------------------------------------------------------


def test_inverse_straight_is_s_plus_disk_run(g10):
    for phi in (0.0, 1.0, -2.5):
        ls = inverse_section(SectionConfig(0.0, phi, 100.0), g10)
        assert ls.as_array() == pytest.approx([130.0, 130.0, 130.0], abs=1e-12)


def test_inverse_matches_chord_oracle_worked_example(g10):
    ls = inverse_section(SectionConfig(0.005, 0.0, 100.0), g10)
    expected = [129.98958365884934, 128.90716466431945, 131.07200265337923]
    assert ls.as_array() == pytest.approx(expected, abs=1e-9)


def test_inverse_120_degree_symmetry_is_cyclic(g10):
    base = inverse_section(SectionConfig(0.005, 0.0, 100.0), g10)
    rotated = inverse_section(SectionConfig(0.005, TWO_THIRDS_PI, 100.0), g10)
    assert rotated.l1 == base.l2
    assert rotated.l2 == base.l3
    assert rotated.l3 == base.l1


def test_inverse_rejects_kappa_d_domain(g10):
    with pytest.raises(DomainError):
        inverse_section(SectionConfig(0.5, 0.0, 100.0), g10)


def test_inverse_strict_mode_enforces_limits(g10):
    with pytest.raises(LimitViolation):
        inverse_section(SectionConfig(0.0, 0.0, 500.0), g10, strict=True)
    with pytest.raises(LimitViolation):
        inverse_section(SectionConfig(0.03, 0.0, 100.0), g10, strict=True)  # bend 3 rad


def test_mean_length_identity(g10):
    # (l1+l2+l3)/3 - n*h equals the central chord K/kappa
    cfg = SectionConfig(0.012, 0.8, 120.0)
    ls = inverse_section(cfg, g10)
    mean_arc = (ls.l1 + ls.l2 + ls.l3) / 3.0 - g10.n * g10.h
    x = cfg.kappa * cfg.s / (2 * g10.n)
    chord = 2.0 * g10.n * math.sin(x) / cfg.kappa
    assert mean_arc == pytest.approx(chord, abs=1e-9)


# --- rotated maps --------------------------------------------------------


def test_rotated_zero_offset_is_identity(g10):
    cfg = SectionConfig(0.007, 0.4, 90.0)
    assert rotated_inverse(cfg, g10, 0.0) == inverse_section(cfg, g10)


def test_rotated_straight_is_offset_free(g10):
    ls = rotated_inverse(SectionConfig(0.0, 0.0, 100.0), g10, GROUP_OFFSET)
    assert ls.as_array() == pytest.approx([130.0, 130.0, 130.0], abs=1e-12)


def test_rotated_equals_shifted_phi(g10):
    cfg = SectionConfig(0.005, 0.0, 100.0)
    shifted = inverse_section(SectionConfig(0.005, GROUP_OFFSET, 100.0), g10)
    assert rotated_inverse(cfg, g10, GROUP_OFFSET) == shifted


def test_rotated_matches_rotated_oracle(g10):
    cfg = SectionConfig(0.005, 0.0, 100.0)
    expected = [129.18618284042904, 129.56210301217345, 131.2204651239456]
    assert rotated_inverse(cfg, g10, GROUP_OFFSET).as_array() == pytest.approx(expected, abs=1e-9)
    assert chord_oracle(cfg, g10, GROUP_OFFSET).as_array() == pytest.approx(expected, abs=1e-12)


# --- round trip and oracle properties ------------------------------------


@settings(max_examples=200, deadline=None)
@given(
    kappa_frac=st.floats(0.0, 1.0),
    phi=st.floats(-math.pi, math.pi, exclude_max=True),
    s_frac=st.floats(0.0, 1.0),
)
def test_roundtrip_property(g10, kappa_frac, phi, s_frac):
    cfg = in_limit_config(g10, kappa_frac, phi, s_frac)
    back = forward_section(inverse_section(cfg, g10), g10)
    assert abs(back.kappa - cfg.kappa) < 1e-9
    assert abs(back.s - cfg.s) < 1e-9
    # phi recovery divides rounding noise of ~130 mm lengths by u*d*kappa,
    # so the 1e-9 bound is only attainable above kappa ~ 1e-7
    if cfg.kappa > 1e-6:
        assert abs(math.remainder(back.phi - cfg.phi, 2 * math.pi)) < 1e-9
    elif cfg.kappa > EPS_STRAIGHT:
        assert abs(math.remainder(back.phi - cfg.phi, 2 * math.pi)) < 1e-6


@settings(max_examples=150, deadline=None)
@given(
    kappa_frac=st.floats(0.0, 1.0),
    phi=st.floats(-math.pi, math.pi, exclude_max=True),
    s_frac=st.floats(0.0, 1.0),
    steps=st.integers(0, 2),
)
def test_oracle_equivalence_property(g10, kappa_frac, phi, s_frac, steps):
    cfg = in_limit_config(g10, kappa_frac, phi, s_frac)
    offset = steps * GROUP_OFFSET
    analytic = rotated_inverse(cfg, g10, offset).as_array()
    truth = chord_oracle(cfg, g10, offset).as_array()
    assert np.abs(analytic - truth).max() < 1e-6


def test_straight_limit_continuity(g10):
    # no branch jump where the straight treatment begins; at s = 40 the
    # true variation s*d*dkappa stays inside the 1e-6 budget
    s = 40.0
    for phi in (0.3, -1.2):
        below = inverse_section(SectionConfig(0.5 * EPS_STRAIGHT, phi, s), g10).as_array()
        above = inverse_section(SectionConfig(1.5 * EPS_STRAIGHT, phi, s), g10).as_array()
        assert np.abs(above - below).max() < 1e-6


def test_near_straight_matches_first_order_series(g10):
    # catches any branch that drops the asymmetry term near kappa = 0
    s = 100.0
    for kappa in (0.5 * EPS_STRAIGHT, 1.5 * EPS_STRAIGHT, 10 * EPS_STRAIGHT):
        for phi in (0.0, 0.7, -2.1):
            ls = inverse_section(SectionConfig(kappa, phi, s), g10).as_array()
            series = np.array(
                [
                    s * (1.0 - g10.d * kappa * math.sin(phi + i * TWO_THIRDS_PI)) + g10.n * g10.h
                    for i in range(3)
                ]
            )
            assert np.abs(ls - series).max() < 1e-10


def test_jacobian_straight_limit_continuity(g10):
    # d(dl/dkappa)/dkappa ~ s^3/(12 n^2) bounds the true variation; within
    # budget at s = 40
    for phi in (0.3, -1.2):
        below = section_jacobian_inverse(SectionConfig(0.5 * EPS_STRAIGHT, phi, 40.0), g10)
        above = section_jacobian_inverse(SectionConfig(1.5 * EPS_STRAIGHT, phi, 40.0), g10)
        assert np.abs(above - below).max() < 1e-6


# --- Jacobian ------------------------------------------------------------


def test_jacobian_straight_s_column(g10):
    jac = section_jacobian_inverse(SectionConfig(0.0, 0.0, 100.0), g10)
    assert jac[:, 2] == pytest.approx([1.0, 1.0, 1.0], abs=1e-12)
    assert jac[:, 1] == pytest.approx([0.0, 0.0, 0.0], abs=1e-12)


def test_jacobian_matches_finite_differences(g10):
    rng = np.random.default_rng(11)
    for _ in range(50):
        cfg = in_limit_config(g10, rng.uniform(0.05, 1), rng.uniform(-math.pi, math.pi), rng.uniform(0, 1))
        offset = rng.choice([0.0, GROUP_OFFSET, 2 * GROUP_OFFSET])
        jac = section_jacobian_inverse(cfg, g10, offset)
        step = 1e-6
        fd = np.zeros((3, 3))
        base = np.array([cfg.kappa, cfg.phi, cfg.s])
        for j in range(3):
            hi, lo = base.copy(), base.copy()
            hi[j] += step * max(1.0, abs(base[j]))
            lo[j] -= step * max(1.0, abs(base[j]))
            l_hi = rotated_inverse(SectionConfig(*hi), g10, offset).as_array()
            l_lo = rotated_inverse(SectionConfig(*lo), g10, offset).as_array()
            fd[:, j] = (l_hi - l_lo) / (hi[j] - lo[j])
        assert (np.abs(jac - fd) / (1 + np.abs(fd))).max() < 1e-6


def test_jacobian_s_rate_mean_asymmetry(g10):
    # moving s at fixed bend changes each tendon by cos(x)*(1 - d*kappa*sin(phi_i))
    cfg = SectionConfig(0.005, 0.0, 100.0)
    jac = section_jacobian_inverse(cfg, g10)
    x = cfg.kappa * cfg.s / (2 * g10.n)
    for i in range(3):
        expected = math.cos(x) * (1.0 - g10.d * cfg.kappa * math.sin(i * TWO_THIRDS_PI))
        assert jac[i, 2] == pytest.approx(expected, rel=1e-12)


# --- poses and oracle construction ---------------------------------------


def test_poses_straight_line(g10):
    poses = config_to_poses(SectionConfig(0.0, 0.0, 100.0), g10, Pose.identity(), 11)
    pts = np.array([p.position for p in poses])
    assert pts[:, :2] == pytest.approx(np.zeros((11, 2)), abs=1e-12)
    assert pts[0, 2] == 0.0
    assert pts[-1, 2] == pytest.approx(100.0 + g10.n * g10.h, abs=1e-12)
    assert np.all(np.diff(pts[:, 2]) > 0)


def test_poses_quarter_arc_tip_perpendicular(g10):
    cfg = SectionConfig(math.pi / 2 / 100.0, 0.0, 100.0)
    poses = config_to_poses(cfg, g10, Pose.identity(), 9)
    tip_tangent = poses[-1].orientation[:, 2]
    assert abs(tip_tangent @ np.array([0.0, 0.0, 1.0])) < 1e-12


def test_poses_orthonormal_and_right_handed(g10):
    cfg = SectionConfig(0.01, 0.7, 120.0)
    for pose in config_to_poses(cfg, g10, Pose.identity(), 7):
        r = pose.orientation
        assert np.abs(r @ r.T - np.eye(3)).max() < 1e-9
        assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-9)


def test_poses_tip_matches_disk_chain(g10):
    cfg = SectionConfig(0.012, 1.1, 120.0)
    tip = config_to_poses(cfg, g10, Pose.identity(), 13)[-1].position
    chain_tip = disk_frames(cfg, g10, Pose.identity())[-1].position
    assert np.abs(tip - chain_tip).max() < 1e-6


def test_poses_requires_two_samples(g10):
    with pytest.raises(InvalidInput):
        config_to_poses(SectionConfig(0.0, 0.0, 100.0), g10, Pose.identity(), 1)


def test_oracle_straight_per_tendon(g10):
    ls = chord_oracle(SectionConfig(0.0, 0.0, 100.0), g10)
    assert ls.as_array() == pytest.approx([130.0, 130.0, 130.0], abs=1e-12)


def test_oracle_single_segment_first_order():
    geom = SectionGeometry(n=1, d=2.5, h=3.0, s_min=10.0, s_max=100.0,
                           kappa_max=0.03, theta_max=1.5)
    kappa, s, phi = 1e-5, 50.0, 0.3
    truth = chord_oracle(SectionConfig(kappa, phi, s), geom).as_array()
    first_order = np.array(
        [s * (1.0 - geom.d * kappa * math.sin(phi + i * TWO_THIRDS_PI)) + geom.h for i in range(3)]
    )
    # curvature-squared terms are below s^3*kappa^2/24 ~ 5.3e-7 here
    assert np.abs(truth - first_order).max() < 1e-6
