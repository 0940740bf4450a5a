"""Per-tick telemetry records and their CSV / JSON-lines codecs.

The CSV export carries the fixed column set documented in the README
(time, per-section kappa/phi/s, L1..L9, F1..F9, gripper fields, flags);
the JSON-lines export is lossless and round-trips the full record
including the backbone polyline and spool velocities.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np

from .geometry import Pose
from .kinematics import config_to_poses
from .plant import PlantState

CSV_COLUMNS = (
    ["time"]
    + [f"{q}_{sec}" for sec in ("in", "mid", "out") for q in ("kappa", "phi", "s")]
    + [f"L{i}" for i in range(1, 10)]
    + [f"F{i}" for i in range(1, 10)]
    + ["gripper_a", "gripper_b", "gripper_c", "gripper_zone", "gripper_d_closed", "ballscrew_pos"]
    + ["flag_clamped", "flag_rejected"]
)


@dataclass(frozen=True)
class TelemetryRecord:
    time: float
    config: Tuple[float, ...]  # kappa, phi, s per section, inner/middle/outer
    lengths: Tuple[float, ...]  # required path lengths L1..L9
    tensions: Tuple[float, ...]
    spool_velocities: Tuple[float, ...]
    gripper: Tuple[bool, bool, bool, str, bool, float]  # a, b, c, zone, d_closed, ballscrew
    polyline: Tuple[Tuple[Tuple[float, float, float], ...], ...]  # one tuple of points per section
    events: Tuple[str, ...]
    clamped: bool
    rejected: bool

    @property
    def total_length(self) -> float:
        return self.config[2] + self.config[5] + self.config[8]


def backbone_polyline(
    state: PlantState, samples: int
) -> Tuple[Tuple[Tuple[float, float, float], ...], ...]:
    """Sampled backbone points per section, chained from the world base."""
    base = Pose.identity()
    out: List[Tuple[Tuple[float, float, float], ...]] = []
    for section, geom in zip(state.config.sections(), state.geoms.sections()):
        poses = config_to_poses(section, geom, base, samples)
        out.append(tuple(tuple(float(v) for v in p.position) for p in poses))
        base = poses[-1]
    return tuple(out)


def make_record(
    state: PlantState,
    spool_velocities: np.ndarray,
    polyline_samples: int = 9,
    extra_events: Sequence[str] = (),
    rejected: bool = False,
) -> TelemetryRecord:
    g = state.grippers
    events = tuple(state.events) + tuple(extra_events)
    return TelemetryRecord(
        time=state.time,
        config=tuple(float(v) for v in state.config.as_vector()),
        lengths=tuple(float(v) for v in state.actuator.lengths),
        tensions=tuple(float(v) for v in state.tendon.tensions),
        spool_velocities=tuple(float(v) for v in np.asarray(spool_velocities).reshape(9)),
        gripper=(g.a, g.b, g.c, g.d_zone.value, g.d_closed, float(g.ballscrew_pos)),
        polyline=backbone_polyline(state, polyline_samples),
        events=events,
        clamped=any(e.startswith("clamped") for e in events),
        rejected=rejected,
    )


def _csv_row(record: TelemetryRecord) -> List[str]:
    vals: List[str] = [repr(record.time)]
    vals += [repr(v) for v in record.config]
    vals += [repr(v) for v in record.lengths]
    vals += [repr(v) for v in record.tensions]
    a, b, c, zone, d_closed, pos = record.gripper
    vals += [str(int(a)), str(int(b)), str(int(c)), zone, str(int(d_closed)), repr(pos)]
    vals += [str(int(record.clamped)), str(int(record.rejected))]
    return vals


def export_csv(records: Sequence[TelemetryRecord], path: str) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for rec in records:
                writer.writerow(_csv_row(rec))
    except OSError as exc:
        raise OSError(f"cannot write CSV export to {path}: {exc}") from exc


def import_csv(path: str) -> List[TelemetryRecord]:
    """Read a CSV export back; fields the CSV does not carry are empty."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read CSV export from {path}: {exc}") from exc
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header in {path}")
    out: List[TelemetryRecord] = []
    for row in reader:
        vals = dict(zip(CSV_COLUMNS, row))
        out.append(
            TelemetryRecord(
                time=float(vals["time"]),
                config=tuple(
                    float(vals[f"{q}_{sec}"])
                    for sec in ("in", "mid", "out")
                    for q in ("kappa", "phi", "s")
                ),
                lengths=tuple(float(vals[f"L{i}"]) for i in range(1, 10)),
                tensions=tuple(float(vals[f"F{i}"]) for i in range(1, 10)),
                spool_velocities=(0.0,) * 9,
                gripper=(
                    vals["gripper_a"] == "1",
                    vals["gripper_b"] == "1",
                    vals["gripper_c"] == "1",
                    vals["gripper_zone"],
                    vals["gripper_d_closed"] == "1",
                    float(vals["ballscrew_pos"]),
                ),
                polyline=(),
                events=(),
                clamped=vals["flag_clamped"] == "1",
                rejected=vals["flag_rejected"] == "1",
            )
        )
    return out


def record_to_dict(record: TelemetryRecord) -> dict:
    return {
        "time": record.time,
        "config": list(record.config),
        "lengths": list(record.lengths),
        "tensions": list(record.tensions),
        "spool_velocities": list(record.spool_velocities),
        "gripper": list(record.gripper),
        "polyline": [[list(p) for p in section] for section in record.polyline],
        "events": list(record.events),
        "clamped": record.clamped,
        "rejected": record.rejected,
        "total_length": record.total_length,
    }


def record_from_dict(data: dict) -> TelemetryRecord:
    return TelemetryRecord(
        time=float(data["time"]),
        config=tuple(data["config"]),
        lengths=tuple(data["lengths"]),
        tensions=tuple(data["tensions"]),
        spool_velocities=tuple(data["spool_velocities"]),
        gripper=tuple(data["gripper"]),
        polyline=tuple(tuple(tuple(p) for p in sec) for sec in data["polyline"]),
        events=tuple(data["events"]),
        clamped=bool(data["clamped"]),
        rejected=bool(data["rejected"]),
    )


def export_jsonl(records: Sequence[TelemetryRecord], path: str) -> None:
    try:
        with open(path, "w") as fh:
            for rec in records:
                fh.write(json.dumps(record_to_dict(rec)) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write JSONL export to {path}: {exc}") from exc


def import_jsonl(path: str) -> List[TelemetryRecord]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read JSONL export from {path}: {exc}") from exc
    return [record_from_dict(json.loads(line)) for line in lines if line.strip()]
