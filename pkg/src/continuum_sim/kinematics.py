"""Single-section constant-curvature kinematics.

The forward map recovers (kappa, phi, s) from three tendon free lengths;
the inverse map produces tendon lengths from a configuration. Both treat s
as the bending arc length of the backbone, excluding the n*h of straight
disk passages, so that they are exact mutual inverses and agree with the
explicit 3D chord construction in chord_oracle.

The inverse map is evaluated in the smooth form

    l_i = s*sinc(x) - 2*n*d*sin(x)*sin(phi_i) + n*h,   x = kappa*s/(2n)

which is analytic across kappa = 0, so no branch jump exists at the
straight posture. The three hole angles follow the symmetric convention
phi_i = phi + offset + (i-1)*120 deg.
"""
from __future__ import annotations

import math
from typing import List

import numpy as np

from .errors import DomainError, InvalidInput, LimitViolation, SingularityError
from .geometry import (
    TENDON_SPACING,
    ArcIntermediates,
    Pose,
    SectionConfig,
    SectionGeometry,
    TendonLengths,
)

_SQRT3 = math.sqrt(3.0)


def _sinc(x: float) -> float:
    # series below 1e-4 keeps full double precision through x = 0
    if abs(x) < 1e-4:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return math.sin(x) / x


def _sinc_prime(x: float) -> float:
    if abs(x) < 1e-4:
        x2 = x * x
        return -x / 3.0 + x * x2 / 30.0
    return (x * math.cos(x) - math.sin(x)) / (x * x)


def arc_intermediates(lengths: TendonLengths, geom: SectionGeometry) -> ArcIntermediates:
    """Compute (l_m, l_c, K) for a tendon triple.

    l_m uses the difference form sqrt(((l1-l2)^2+(l2-l3)^2+(l3-l1)^2)/2),
    algebraically equal to the quadratic form but immune to the
    catastrophic cancellation the latter suffers near the straight posture.
    """
    l1, l2, l3 = lengths.l1, lengths.l2, lengths.l3
    l_m = math.sqrt(0.5 * ((l1 - l2) ** 2 + (l2 - l3) ** 2 + (l3 - l1) ** 2))
    l_c = l1 + l2 + l3 - 3.0 * geom.n * geom.h
    arg = l_m / (3.0 * geom.n * geom.d)
    k_chord = 2.0 * geom.n * arg if arg < 1.0 else float("nan")
    return ArcIntermediates(l_m=l_m, l_c=l_c, k_chord=k_chord)


def _asin_ratio(x: float) -> float:
    """arcsin(x)/x, exact through x = 0."""
    if x < 1e-4:
        x2 = x * x
        return 1.0 + x2 / 6.0 + 3.0 * x2 * x2 / 40.0
    return math.asin(x) / x


def forward_section(lengths: TendonLengths, geom: SectionGeometry) -> SectionConfig:
    """Tendon lengths -> (kappa, phi, s) for one section.

    Branch-free: the asymmetry quotient is well defined all the way to
    the straight posture (atan2(0, 0) = 0 and arcsin(x)/x -> 1), so no
    threshold ever injects a round-trip error. Callers that want the
    phi = 0 gauge at kappa ~ 0 canonicalize the result.
    """
    lengths.validate(geom)
    inter = arc_intermediates(lengths, geom)
    l_m, l_c = inter.l_m, inter.l_c
    if l_c <= 0.0:
        raise InvalidInput(f"chord budget l_c = {l_c} must be positive")

    arg = l_m / (3.0 * geom.n * geom.d)
    if arg >= 1.0:
        raise DomainError(
            f"asymmetry l_m = {l_m:.6g} mm exceeds 3*n*d = {3 * geom.n * geom.d:.6g}: "
            "tendon triple is not realizable"
        )
    kappa = 2.0 * l_m / (geom.d * l_c)
    l1, l2, l3 = lengths.l1, lengths.l2, lengths.l3
    phi = math.atan2(l2 + l3 - 2.0 * l1, _SQRT3 * (l3 - l2)) if l_m > 0.0 else 0.0
    s = (l_c / 3.0) * _asin_ratio(arg)
    return SectionConfig(kappa=kappa, phi=phi, s=s)


def inverse_section(
    config: SectionConfig,
    geom: SectionGeometry,
    strict: bool = False,
) -> TendonLengths:
    """(kappa, phi, s) -> tendon lengths for one section.

    With strict=True the configuration must lie inside the geometry
    limits; otherwise only the mathematical domain is enforced.
    """
    return rotated_inverse(config, geom, 0.0, strict=strict)


def rotated_inverse(
    config: SectionConfig,
    geom: SectionGeometry,
    offset: float,
    strict: bool = False,
) -> TendonLengths:
    """Inverse kinematics for a tendon group whose holes are rotated by `offset`.

    Equivalent to inverse_section at (kappa, phi + offset, s): rotating the
    frame about the backbone axis changes only the plane angle.
    """
    if config.kappa < 0.0:
        raise InvalidInput(f"kappa must be >= 0, got {config.kappa}")
    if config.kappa * geom.d >= 1.0:
        raise DomainError(
            f"kappa*d = {config.kappa * geom.d:.4f} >= 1: a tendon radius would be non-positive"
        )
    if strict:
        if not (geom.s_min <= config.s <= geom.s_max):
            raise LimitViolation(f"s = {config.s} outside [{geom.s_min}, {geom.s_max}]")
        if config.kappa > geom.kappa_max:
            raise LimitViolation(f"kappa = {config.kappa} exceeds {geom.kappa_max}")
        if config.bend_angle > geom.theta_max:
            raise LimitViolation(
                f"bend angle {config.bend_angle} rad exceeds {geom.theta_max} rad"
            )

    x = config.kappa * config.s / (2.0 * geom.n)
    mean = config.s * _sinc(x)
    amp = 2.0 * geom.n * geom.d * math.sin(x)
    run = geom.disk_run
    base = config.phi + offset
    ls = [mean - amp * math.sin(base + i * TENDON_SPACING) + run for i in range(3)]
    return TendonLengths(ls[0], ls[1], ls[2])


def section_jacobian_inverse(
    config: SectionConfig,
    geom: SectionGeometry,
    offset: float = 0.0,
) -> np.ndarray:
    """Analytic 3x3 Jacobian d(l1,l2,l3)/d(kappa, phi, s) of rotated_inverse.

    Columns are ordered (kappa, phi, s). Smooth across the straight
    posture: at kappa = 0 the columns are (-d*s*sin(phi_i), 0, 1).
    """
    if config.kappa < 0.0 or config.kappa * geom.d >= 1.0:
        raise DomainError(f"configuration outside the inverse map domain: kappa={config.kappa}")
    n, d = geom.n, geom.d
    x = config.kappa * config.s / (2.0 * n)
    sx, cx = math.sin(x), math.cos(x)
    spx = _sinc_prime(x)
    jac = np.empty((3, 3), dtype=float)
    base = config.phi + offset
    for i in range(3):
        ang = base + i * TENDON_SPACING
        sa, ca = math.sin(ang), math.cos(ang)
        jac[i, 0] = (config.s * config.s / (2.0 * n)) * spx - d * config.s * cx * sa
        jac[i, 1] = -2.0 * n * d * sx * ca
        jac[i, 2] = cx * (1.0 - d * config.kappa * sa)
    if not np.all(np.isfinite(jac)):
        raise SingularityError(f"non-finite Jacobian at {config}")
    return jac


def _arc_pose(kappa: float, phi: float, arc_len: float) -> Pose:
    """Frame transform of a torsion-free constant-curvature arc."""
    theta = kappa * arc_len
    cp, sp = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    rot_z = np.array([[cp, -sp, 0.0], [sp, cp, 0.0], [0.0, 0.0, 1.0]])
    rot_y = np.array([[ct, 0.0, st], [0.0, 1.0, 0.0], [-st, 0.0, ct]])
    rotation = rot_z @ rot_y @ rot_z.T
    if abs(theta) < 1e-9:
        # second order series keeps the translation continuous at kappa -> 0
        x_loc = arc_len * theta / 2.0
        z_loc = arc_len * (1.0 - theta * theta / 6.0)
    else:
        x_loc = (1.0 - ct) / kappa
        z_loc = st / kappa
    translation = rot_z @ np.array([x_loc, 0.0, z_loc])
    return Pose(translation, rotation)


def disk_frames(config: SectionConfig, geom: SectionGeometry, base: Pose) -> List[Pose]:
    """World frames of the 2(n)+1 disk faces along one section.

    Returns [disk0 top, disk1 bottom, disk1 top, ..., diskN bottom, diskN top]:
    each segment is an arc of length s/n followed by a straight run h
    through the disk. The final pose is the section tip frame.
    """
    seg_arc = _arc_pose(config.kappa, config.phi, config.s / geom.n)
    disk = Pose(np.array([0.0, 0.0, geom.h]), np.eye(3))
    frames = [base]
    cur = base
    for _ in range(geom.n):
        cur = cur.compose(seg_arc)
        frames.append(cur)
        cur = cur.compose(disk)
        frames.append(cur)
    return frames


def config_to_poses(
    config: SectionConfig,
    geom: SectionGeometry,
    base: Pose,
    samples: int,
) -> List[Pose]:
    """Sample `samples` frames along a section, disk runs included.

    Frames are evenly spaced in path length over the total s + n*h; the
    first is `base`, the last is the section tip frame.
    """
    if samples < 2:
        raise InvalidInput(f"samples must be >= 2, got {samples}")
    seg_len = config.s / geom.n
    total = config.s + geom.disk_run
    cell = seg_len + geom.h
    full_seg = _arc_pose(config.kappa, config.phi, seg_len)

    # walk cell by cell, emitting each sample from the frame at its cell start
    poses: List[Pose] = []
    cell_start = base
    idx = 0
    for k in range(samples):
        t = total * k / (samples - 1)
        target = min(int(t / cell) if cell > 0.0 else 0, geom.n - 1)
        while idx < target:
            cell_start = cell_start.compose(full_seg)
            cell_start = cell_start.compose(Pose(np.array([0.0, 0.0, geom.h]), np.eye(3)))
            idx += 1
        local = t - idx * cell
        if local <= seg_len:
            poses.append(cell_start.compose(_arc_pose(config.kappa, config.phi, local)))
        else:
            tip = cell_start.compose(full_seg)
            poses.append(tip.compose(Pose(np.array([0.0, 0.0, local - seg_len]), np.eye(3))))
    return poses


def chord_oracle(
    config: SectionConfig,
    geom: SectionGeometry,
    offset: float = 0.0,
) -> TendonLengths:
    """Ground-truth tendon lengths from the explicit 3D disk chain.

    Builds every guide disk frame along the arc, places the three holes at
    radius d, and sums the straight chords between consecutive disk faces
    plus the n*h of axial passages. The analytic maps must match this.
    Plain float arithmetic: this runs tens of thousands of times in the
    verification suites.
    """
    seg = _arc_pose(config.kappa, config.phi, config.s / geom.n)
    a00, a01, a02 = seg.orientation[0]
    a10, a11, a12 = seg.orientation[1]
    a20, a21, a22 = seg.orientation[2]
    px, py, pz = seg.position

    # hole i sits at 90 deg - offset - (i-1)*120 deg so that bending toward
    # phi shortens tendon i in proportion to sin(phi + offset + (i-1)*120)
    holes = []
    for i in range(3):
        ang = math.pi / 2.0 - offset - i * TENDON_SPACING
        holes.append((geom.d * math.cos(ang), geom.d * math.sin(ang)))

    # frame of the current disk top face: rotation rows + origin
    r00, r01, r02, r10, r11, r12, r20, r21, r22 = 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0
    ox, oy, oz = 0.0, 0.0, 0.0
    totals = [0.0, 0.0, 0.0]
    h = geom.h
    for _ in range(geom.n):
        # next disk bottom face: current frame composed with the arc step
        n00 = r00 * a00 + r01 * a10 + r02 * a20
        n01 = r00 * a01 + r01 * a11 + r02 * a21
        n02 = r00 * a02 + r01 * a12 + r02 * a22
        n10 = r10 * a00 + r11 * a10 + r12 * a20
        n11 = r10 * a01 + r11 * a11 + r12 * a21
        n12 = r10 * a02 + r11 * a12 + r12 * a22
        n20 = r20 * a00 + r21 * a10 + r22 * a20
        n21 = r20 * a01 + r21 * a11 + r22 * a21
        n22 = r20 * a02 + r21 * a12 + r22 * a22
        nx = ox + r00 * px + r01 * py + r02 * pz
        ny = oy + r10 * px + r11 * py + r12 * pz
        nz = oz + r20 * px + r21 * py + r22 * pz
        for i, (hx, hy) in enumerate(holes):
            dx = (nx + n00 * hx + n01 * hy) - (ox + r00 * hx + r01 * hy)
            dy = (ny + n10 * hx + n11 * hy) - (oy + r10 * hx + r11 * hy)
            dz = (nz + n20 * hx + n21 * hy) - (oz + r20 * hx + r21 * hy)
            totals[i] += math.sqrt(dx * dx + dy * dy + dz * dz)
        # pass through the disk: advance h along the local z-axis
        r00, r01, r02, r10, r11, r12, r20, r21, r22 = n00, n01, n02, n10, n11, n12, n20, n21, n22
        ox, oy, oz = nx + n02 * h, ny + n12 * h, nz + n22 * h
    run = geom.disk_run
    return TendonLengths(totals[0] + run, totals[1] + run, totals[2] + run)
