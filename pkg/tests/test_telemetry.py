"""Telemetry records and the CSV / JSONL codecs."""
import numpy as np
import pytest

from continuum_sim.plant import initial_state, step
from continuum_sim.telemetry import (
    CSV_COLUMNS,
    export_csv,
    export_jsonl,
    import_csv,
    import_jsonl,
    make_record,
)

STIFFNESS_REF = 39.24 / 15.84


@pytest.fixture(scope="module")
def records(geoms):
    state = initial_state(geoms, STIFFNESS_REF, 1125.0, 5.0)
    out = []
    rng = np.random.default_rng(2)
    for _ in range(5):
        vel = rng.uniform(-0.5, 0.5, 9)
        state = step(state, vel, 0.0, 0.01)
        out.append(make_record(state, vel, polyline_samples=5))
    return out


def test_csv_header_and_row_count(records, tmp_path):
    path = tmp_path / "out.csv"
    export_csv(records, str(path))
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 6  # header + one row per tick
    assert lines[0].split(",") == CSV_COLUMNS


def test_csv_column_order_fixed():
    assert CSV_COLUMNS[0] == "time"
    assert CSV_COLUMNS[1:10] == [
        "kappa_in", "phi_in", "s_in",
        "kappa_mid", "phi_mid", "s_mid",
        "kappa_out", "phi_out", "s_out",
    ]
    assert CSV_COLUMNS[10] == "L1"
    assert CSV_COLUMNS[19] == "F1"
    assert CSV_COLUMNS[-2:] == ["flag_clamped", "flag_rejected"]


def test_csv_roundtrip_covered_fields(records, tmp_path):
    path = tmp_path / "out.csv"
    export_csv(records, str(path))
    back = import_csv(str(path))
    assert len(back) == len(records)
    for orig, rec in zip(records, back):
        assert rec.time == orig.time
        assert rec.config == orig.config
        assert rec.lengths == orig.lengths
        assert rec.tensions == orig.tensions
        assert rec.gripper == orig.gripper
        assert rec.clamped == orig.clamped
        assert rec.rejected == orig.rejected


def test_jsonl_roundtrip_lossless(records, tmp_path):
    path = tmp_path / "out.jsonl"
    export_jsonl(records, str(path))
    back = import_jsonl(str(path))
    assert back == list(records)


def test_polyline_consistent_with_pose_sampler(geoms):
    from continuum_sim.geometry import Pose
    from continuum_sim.kinematics import config_to_poses

    state = initial_state(geoms, STIFFNESS_REF, 1125.0, 5.0)
    record = make_record(state, np.zeros(9), polyline_samples=7)
    base = Pose.identity()
    for section, geom, points in zip(
        state.config.sections(), geoms.sections(), record.polyline
    ):
        poses = config_to_poses(section, geom, base, 7)
        assert np.allclose([p.position for p in poses], points, atol=1e-12)
        base = poses[-1]


def test_export_error_carries_path(records):
    with pytest.raises(OSError, match="/no/such/dir/out.csv"):
        export_csv(records, "/no/such/dir/out.csv")
