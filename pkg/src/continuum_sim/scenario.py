"""Replayable scenario scripts and the headless deterministic runner.

A script is a JSON document with timed events: velocity segments
(configuration-space rates latched for a duration), ballscrew segments,
gripper rows and calibrate markers. The same script and configuration
always produce bit-identical telemetry: the runner uses no wall clock
and no randomness.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .config import AppConfig
from .errors import InvalidGripperCombination, ScriptError, SimFault
from .plant import GripperState, GripperZone, is_valid_gripper_command
from .simulation import SimulationSession
from .telemetry import TelemetryRecord

EVENT_KINDS = ("velocity", "ballscrew", "gripper", "calibrate")


@dataclass(frozen=True)
class ScenarioEvent:
    t: float
    kind: str
    duration: float = 0.0
    cdot: Optional[tuple] = None
    velocity: float = 0.0
    gripper: Optional[GripperState] = None

    @property
    def end(self) -> float:
        return self.t + self.duration


@dataclass(frozen=True)
class ScenarioScript:
    name: str
    duration: float
    events: tuple


def _parse_event(raw: dict, index: int) -> ScenarioEvent:
    kind = raw.get("kind")
    if kind not in EVENT_KINDS:
        raise ScriptError(f"event {index}: unknown kind {kind!r}")
    t = raw.get("t")
    if not isinstance(t, (int, float)) or t < 0:
        raise ScriptError(f"event {index}: start time must be a non-negative number")
    duration = raw.get("duration", 0.0)
    if not isinstance(duration, (int, float)) or duration < 0:
        raise ScriptError(f"event {index}: duration must be non-negative")

    if kind == "velocity":
        cdot = raw.get("cdot")
        if not isinstance(cdot, list) or len(cdot) != 9:
            raise ScriptError(f"event {index}: velocity needs a 9-element cdot")
        if not all(isinstance(v, (int, float)) for v in cdot):
            raise ScriptError(f"event {index}: cdot entries must be numbers")
        return ScenarioEvent(t=float(t), kind=kind, duration=float(duration), cdot=tuple(cdot))
    if kind == "ballscrew":
        vel = raw.get("velocity")
        if not isinstance(vel, (int, float)):
            raise ScriptError(f"event {index}: ballscrew needs a numeric velocity")
        return ScenarioEvent(t=float(t), kind=kind, duration=float(duration), velocity=float(vel))
    if kind == "gripper":
        try:
            zone = GripperZone(raw.get("zone"))
        except ValueError:
            raise ScriptError(f"event {index}: zone must be I, II or III") from None
        flags = [raw.get(k) for k in ("a", "b", "c", "d_closed")]
        if not all(isinstance(v, bool) for v in flags):
            raise ScriptError(f"event {index}: gripper flags a/b/c/d_closed must be booleans")
        a, b, c, d_closed = flags
        if not is_valid_gripper_command(a, b, c, zone, d_closed):
            raise ScriptError(f"event {index}: gripper tuple is not a valid actuation row")
        return ScenarioEvent(
            t=float(t), kind=kind,
            gripper=GripperState(a=a, b=b, c=c, d_zone=zone, d_closed=d_closed),
        )
    return ScenarioEvent(t=float(t), kind="calibrate")


def parse_script(data: dict, name: str = "<inline>") -> ScenarioScript:
    if not isinstance(data, dict):
        raise ScriptError("script must be a JSON object")
    duration = data.get("duration")
    if not isinstance(duration, (int, float)) or duration <= 0:
        raise ScriptError("script duration must be a positive number")
    raw_events = data.get("events", [])
    if not isinstance(raw_events, list):
        raise ScriptError("events must be a list")
    events = [_parse_event(raw, i) for i, raw in enumerate(raw_events)]
    times = [e.t for e in events]
    if times != sorted(times):
        raise ScriptError("event times must be monotonic")
    # gripper changes must not overlap ballscrew segments
    for g in events:
        if g.kind != "gripper":
            continue
        for seg in events:
            if seg.kind == "ballscrew" and seg.velocity != 0.0 and seg.t < g.t < seg.end:
                raise ScriptError(
                    f"gripper change at t={g.t} overlaps a ballscrew segment "
                    f"[{seg.t}, {seg.end}]"
                )
    return ScenarioScript(name=data.get("name", name), duration=float(duration), events=tuple(events))


def load_script(path: str) -> ScenarioScript:
    p = Path(path)
    if not p.exists():
        bundled = bundled_script_path(path)
        if bundled is not None:
            p = bundled
        else:
            raise ScriptError(f"script not found: {path}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ScriptError(f"script is not valid JSON: {exc}") from exc
    return parse_script(data, name=p.stem)


def bundled_script_path(name: str) -> Optional[Path]:
    """Resolve a script that ships with the package (fig8.scn, fig10.scn, stress.scn)."""
    candidate = resources.files("continuum_sim") / "scenarios" / name
    try:
        if candidate.is_file():
            return Path(str(candidate))
    except TypeError:
        pass
    return None


@dataclass
class ScenarioReport:
    ticks: int = 0
    limit_events: int = 0
    clamp_events: int = 0
    rejected_steps: int = 0
    saturation_events: int = 0
    max_kappa_drift: Dict[str, float] = field(default_factory=dict)
    total_length_range: tuple = (0.0, 0.0)

    def summary_lines(self) -> List[str]:
        lines = [
            f"ticks: {self.ticks}",
            f"limit events: {self.limit_events}",
            f"clamp events: {self.clamp_events}",
            f"rejected steps: {self.rejected_steps}",
            f"tension saturation events: {self.saturation_events}",
            "total length range: [%.3f, %.3f] mm" % self.total_length_range,
        ]
        for sec, drift in self.max_kappa_drift.items():
            lines.append(f"max idle kappa drift {sec}: {drift:.3e} 1/mm")
        return lines


@dataclass
class ScenarioResult:
    records: List[TelemetryRecord]
    report: ScenarioReport


def _kappa_command_mask(script: ScenarioScript, times: Sequence[float]) -> np.ndarray:
    """mask[j, i]: section j has a nonzero commanded kappa rate at times[i]."""
    arr = np.asarray(times)
    mask = np.zeros((3, len(arr)), dtype=bool)
    for ev in script.events:
        if ev.kind == "velocity" and ev.cdot is not None:
            for j in range(3):
                if ev.cdot[3 * j] != 0.0:
                    mask[j] |= (arr >= ev.t) & (arr < ev.end)
        elif ev.kind == "calibrate":
            # the reset makes kappa jump by design; exclude the instant
            mask[:, np.searchsorted(arr, ev.t)] = True if len(arr) else False
    return mask


def _drift_report(script: ScenarioScript, records: List[TelemetryRecord]) -> Dict[str, float]:
    """Largest kappa excursion of each section while it is not commanded."""
    times = [r.time for r in records]
    mask = _kappa_command_mask(script, times)
    out: Dict[str, float] = {}
    for j, name in enumerate(("inner", "middle", "outer")):
        kappas = np.array([r.config[3 * j] for r in records])
        idle = ~mask[j]
        drift = 0.0
        i = 0
        n = len(records)
        while i < n:
            if not idle[i]:
                i += 1
                continue
            k = i
            while k < n and idle[k]:
                k += 1
            window = kappas[i:k]
            drift = max(drift, float(window.max() - window.min()))
            i = k
        out[name] = drift
    return out


def run_scenario(script: ScenarioScript, cfg: AppConfig) -> ScenarioResult:
    """Execute a script headlessly; bit-identical output for identical inputs."""
    session = SimulationSession(cfg)
    dt = session.dt
    ticks = int(round(script.duration / dt))
    records: List[TelemetryRecord] = []
    report = ScenarioReport()
    pending = list(script.events)

    for _ in range(ticks):
        now = session.time
        while pending and pending[0].t <= now + dt * 0.5:
            ev = pending.pop(0)
            if ev.kind == "velocity":
                session.set_velocity(np.asarray(ev.cdot), expires_at=ev.end)
            elif ev.kind == "ballscrew":
                session.set_ballscrew(ev.velocity, expires_at=ev.end)
            elif ev.kind == "gripper":
                try:
                    session.request_gripper(ev.gripper)
                except InvalidGripperCombination as exc:
                    raise SimFault(f"gripper command at t={ev.t} rejected: {exc}") from exc
            elif ev.kind == "calibrate":
                session.request_calibrate()
        record = session.tick()
        records.append(record)
        if record.rejected:
            report.rejected_steps += 1
            raise SimFault(
                f"plant rejected the step at t={record.time:.3f}s: {record.events}"
            )

    report.ticks = len(records)
    report.limit_events = sum(
        1 for r in records for e in r.events if e.startswith("limit_violation")
    )
    report.clamp_events = sum(1 for r in records if r.clamped)
    report.saturation_events = sum(
        1 for r in records for e in r.events if e.startswith("tension_saturated")
    )
    totals = [r.total_length for r in records]
    report.total_length_range = (min(totals), max(totals))
    report.max_kappa_drift = _drift_report(script, records)
    return ScenarioResult(records=records, report=report)
