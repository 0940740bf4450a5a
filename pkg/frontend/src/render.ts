// Scene rendering. Every drawn backbone point comes from the gateway's
// polyline; the only math here is the camera transform and screen-space
// layout. Pure helpers are exported for tests; canvas wiring stays thin.

import { TelemetryRecord } from './protocol.js';

export const SECTION_COLORS = ['#d9433b', '#3fa34d', '#3b6fd9']; // inner, middle, outer
export const TENSION_LIMIT = 65;

export interface Camera {
  yaw: number; // rotation about the world z-axis (rad)
  pitch: number; // tilt toward the viewer (rad)
  scale: number; // px per mm
  cx: number; // screen centre x
  cy: number; // screen bottom y (world origin)
}

export const DEFAULT_CAMERA: Camera = {
  yaw: Math.PI / 6,
  pitch: Math.PI / 7,
  scale: 1.6,
  cx: 340,
  cy: 560,
};

// World (mm, z up) to screen (px, y down).
export function projectPoint(p: number[], cam: Camera): [number, number] {
  const [x, y, z] = p;
  const cy = Math.cos(cam.yaw);
  const sy = Math.sin(cam.yaw);
  const xr = cy * x - sy * y;
  const yr = sy * x + cy * y;
  const cp = Math.cos(cam.pitch);
  const sp = Math.sin(cam.pitch);
  const horiz = xr;
  const vert = z * cp - yr * sp;
  return [cam.cx + horiz * cam.scale, cam.cy - vert * cam.scale];
}

export function projectPolyline(points: number[][], cam: Camera): [number, number][] {
  return points.map((p) => projectPoint(p, cam));
}

// Bar heights in [0, 1] against the saturation limit, with a flag when
// a tendon is at or beyond it.
export function tensionBars(tensions: number[]): { frac: number; saturated: boolean }[] {
  return tensions.map((f) => ({
    frac: Math.max(0, Math.min(f / TENSION_LIMIT, 1)),
    saturated: f >= TENSION_LIMIT,
  }));
}

export interface LimitFlags {
  inner: boolean;
  middle: boolean;
  outer: boolean;
}

export function limitFlags(record: TelemetryRecord): LimitFlags {
  const hit = (name: string) =>
    record.events.some((e) => e.startsWith('clamped:' + name) || e.startsWith('limit_violation:' + name));
  return { inner: hit('inner'), middle: hit('middle'), outer: hit('outer') };
}

// Bend fraction per section for the limit bars: bend angle over its cap.
export function bendFractions(record: TelemetryRecord, thetaMax: number[]): number[] {
  return [0, 1, 2].map((i) => {
    const bend = record.config[3 * i] * record.config[3 * i + 2];
    return Math.max(0, Math.min(bend / thetaMax[i], 1));
  });
}

export interface SceneModel {
  sections: [number, number][][];
  tipScreen: [number, number];
  tipHeading: [number, number]; // unit screen vector along the tip tangent
  bars: { frac: number; saturated: boolean }[];
  flags: LimitFlags;
  totalLength: number;
}

// Everything the canvas pass needs, derived once per frame.
export function buildScene(record: TelemetryRecord, cam: Camera): SceneModel {
  const sections = record.polyline.map((pts) => projectPolyline(pts, cam));
  const last = sections[sections.length - 1];
  const tip = last[last.length - 1];
  const prev = last.length > 1 ? last[last.length - 2] : tip;
  let hx = tip[0] - prev[0];
  let hy = tip[1] - prev[1];
  const norm = Math.hypot(hx, hy) || 1;
  hx /= norm;
  hy /= norm;
  return {
    sections,
    tipScreen: tip,
    tipHeading: [hx, hy],
    bars: tensionBars(record.tensions),
    flags: limitFlags(record),
    totalLength: record.total_length,
  };
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  record: TelemetryRecord,
  cam: Camera,
  width: number,
  height: number,
): void {
  const scene = buildScene(record, cam);
  ctx.clearRect(0, 0, width, height);

  // base plate
  ctx.strokeStyle = '#555';
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(cam.cx - 60, cam.cy);
  ctx.lineTo(cam.cx + 60, cam.cy);
  ctx.stroke();

  scene.sections.forEach((pts, i) => {
    ctx.strokeStyle = SECTION_COLORS[i];
    ctx.lineWidth = 3 - i * 0.5;
    ctx.beginPath();
    pts.forEach(([x, y], k) => (k === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y)));
    ctx.stroke();
  });

  // tip frame glyph: a dot plus the heading tick
  const [tx, ty] = scene.tipScreen;
  ctx.fillStyle = '#111';
  ctx.beginPath();
  ctx.arc(tx, ty, 4, 0, 2 * Math.PI);
  ctx.fill();
  ctx.strokeStyle = '#111';
  ctx.beginPath();
  ctx.moveTo(tx, ty);
  ctx.lineTo(tx + scene.tipHeading[0] * 18, ty + scene.tipHeading[1] * 18);
  ctx.stroke();
}
