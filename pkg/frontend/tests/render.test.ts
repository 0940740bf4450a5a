import { describe, expect, it } from 'vitest';

import { TelemetryRecord } from '../src/protocol.js';
import {
  bendFractions,
  buildScene,
  Camera,
  limitFlags,
  projectPoint,
  tensionBars,
} from '../src/render.js';

const cam: Camera = { yaw: 0.5, pitch: 0.4, scale: 2, cx: 300, cy: 500 };

function record(overrides: Partial<TelemetryRecord> = {}): TelemetryRecord {
  return {
    time: 1.0,
    config: [0, 0, 38, 0, 0, 44, 0, 0, 78],
    lengths: new Array(9).fill(100),
    tensions: new Array(9).fill(5),
    spool_velocities: new Array(9).fill(0),
    gripper: [true, true, true, 'I', false, 0],
    polyline: [
      [[0, 0, 0], [0, 0, 37], [0, 0, 74]],
      [[0, 0, 74], [0, 0, 115], [0, 0, 156]],
      [[0, 0, 156], [0, 0, 205], [0, 0, 254]],
    ],
    events: [],
    clamped: false,
    rejected: false,
    total_length: 160,
    ...overrides,
  };
}

describe('camera projection', () => {
  it('maps the world origin to the screen anchor', () => {
    expect(projectPoint([0, 0, 0], cam)).toEqual([cam.cx, cam.cy]);
  });

  it('maps +z straight up the screen', () => {
    const [x, y] = projectPoint([0, 0, 100], cam);
    expect(x).toBeCloseTo(cam.cx, 9);
    expect(y).toBeLessThan(cam.cy);
  });

  it('is affine: collinear world points stay collinear on screen', () => {
    const pts = [
      [3, 7, 1],
      [6, 14, 2],
      [9, 21, 3],
    ].map((p) => projectPoint(p, cam));
    const cross =
      (pts[1][0] - pts[0][0]) * (pts[2][1] - pts[0][1]) -
      (pts[1][1] - pts[0][1]) * (pts[2][0] - pts[0][0]);
    expect(Math.abs(cross)).toBeLessThan(1e-9);
  });
});

describe('scene model', () => {
  it('a calibrated snapshot yields three collinear screen segments', () => {
    const scene = buildScene(record(), cam);
    expect(scene.sections).toHaveLength(3);
    const all = scene.sections.flat();
    const [x0, y0] = all[0];
    const [dx, dy] = [all[all.length - 1][0] - x0, all[all.length - 1][1] - y0];
    for (const [x, y] of all) {
      const cross = (x - x0) * dy - (y - y0) * dx;
      expect(Math.abs(cross)).toBeLessThan(1e-6);
    }
    expect(scene.totalLength).toBe(160);
  });

  it('tip glyph sits at the last polyline point', () => {
    const scene = buildScene(record(), cam);
    const lastSection = record().polyline[2];
    const expected = projectPoint(lastSection[lastSection.length - 1], cam);
    expect(scene.tipScreen[0]).toBeCloseTo(expected[0], 9);
    expect(scene.tipScreen[1]).toBeCloseTo(expected[1], 9);
    expect(Math.hypot(scene.tipHeading[0], scene.tipHeading[1])).toBeCloseTo(1, 9);
  });
});

describe('panel models', () => {
  it('tension bars scale against the 65 N cap and flag saturation', () => {
    const bars = tensionBars([0, 32.5, 65, 80, 5, 5, 5, 5, 5]);
    expect(bars[0]).toEqual({ frac: 0, saturated: false });
    expect(bars[1].frac).toBeCloseTo(0.5, 9);
    expect(bars[2]).toEqual({ frac: 1, saturated: true });
    expect(bars[3]).toEqual({ frac: 1, saturated: true });
  });

  it('limit flags light up the affected section', () => {
    const rec = record({ events: ['clamped:outer.bend', 'limit_violation:inner.s'] });
    expect(limitFlags(rec)).toEqual({ inner: true, middle: false, outer: true });
    expect(limitFlags(record())).toEqual({ inner: false, middle: false, outer: false });
  });

  it('a distal section bent to its cap reads a full limit bar', () => {
    const thetaMax = [(75 * Math.PI) / 180, (75 * Math.PI) / 180, (85 * Math.PI) / 180];
    const sOut = 100;
    const rec = record({
      config: [0, 0, 38, 0, 0, 44, thetaMax[2] / sOut, 0, sOut],
    });
    const fractions = bendFractions(rec, thetaMax);
    expect(fractions[2]).toBeCloseTo(1, 9);
    expect(fractions[0]).toBe(0);
  });
});
