import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';

import { CommandPump, InputTracker } from '../src/input.js';

describe('key to command mapping', () => {
  it('extend key on the selected distal section sets only its arc rate', () => {
    const tracker = new InputTracker({ curvature: 0.002, bendAngle: 0.15, plane: 0.4, extend: 2.0 });
    tracker.keydown('Digit3');
    tracker.keydown('KeyE');
    const cdot = tracker.cdot(100);
    expect(cdot[8]).toBeCloseTo(2.0, 12);
    expect(cdot.filter((v) => v !== 0)).toHaveLength(1);
  });

  it('section select routes the same keys to another block', () => {
    const tracker = new InputTracker();
    tracker.keydown('Digit1');
    tracker.keydown('KeyW');
    const cdot = tracker.cdot(null);
    expect(cdot[0]).toBeGreaterThan(0);
    expect(cdot.slice(1).every((v) => v === 0)).toBe(true);
  });

  it('bend-angle keys convert through the reported arc length', () => {
    const tracker = new InputTracker();
    tracker.keydown('Digit2');
    tracker.keydown('KeyT');
    const cdot = tracker.cdot(75);
    expect(cdot[3]).toBeCloseTo(0.15 / 75, 12);
    // without telemetry the bend-angle channel stays quiet
    expect(tracker.cdot(null)[3]).toBe(0);
  });

  it('opposing keys cancel and rate scale multiplies', () => {
    const tracker = new InputTracker();
    tracker.keydown('KeyA');
    tracker.keydown('KeyD');
    expect(tracker.cdot(null)[7]).toBe(0);
    tracker.keyup('KeyA');
    tracker.rateScale = 2.5;
    expect(tracker.cdot(null)[7]).toBeCloseTo(0.4 * 2.5, 12);
  });

  it('gripper hotkeys and calibrate are discrete actions', () => {
    const tracker = new InputTracker();
    expect(tracker.keydown('Digit9')).toEqual({ kind: 'gripper', row: 'row3' });
    expect(tracker.keydown('Digit0')).toEqual({ kind: 'gripper', row: 'locked' });
    expect(tracker.keydown('KeyC')).toEqual({ kind: 'calibrate' });
    expect(tracker.keydown('KeyW')).toBeNull();
  });

  it('blur releases every held key', () => {
    const tracker = new InputTracker();
    tracker.keydown('KeyW');
    tracker.keydown('KeyE');
    expect(tracker.anyHeld).toBe(true);
    tracker.blur();
    expect(tracker.anyHeld).toBe(false);
    expect(tracker.cdot(50).every((v) => v === 0)).toBe(true);
  });
});

describe('command pump dead-man behaviour', () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it('emits periodic zero vectors with no input', () => {
    const sent: number[][] = [];
    const tracker = new InputTracker();
    const pump = new CommandPump(tracker, (c) => sent.push(c), () => 100, 33);
    pump.start();
    vi.advanceTimersByTime(200);
    pump.stop();
    expect(sent.length).toBeGreaterThanOrEqual(5);
    expect(sent.every((c) => c.every((v) => v === 0))).toBe(true);
  });

  it('focus loss emits one zero vector then goes silent', () => {
    const sent: number[][] = [];
    const tracker = new InputTracker();
    const pump = new CommandPump(tracker, (c) => sent.push(c), () => 100, 33);
    tracker.keydown('KeyE');
    pump.start();
    vi.advanceTimersByTime(100);
    expect(sent.some((c) => c[8] > 0)).toBe(true);

    pump.focusLost();
    const atBlur = sent.length;
    expect(sent[atBlur - 1].every((v) => v === 0)).toBe(true); // immediate, well under 500 ms
    vi.advanceTimersByTime(600);
    expect(sent.length).toBe(atBlur); // silence afterwards
    pump.focusGained();
    vi.advanceTimersByTime(66);
    expect(sent.length).toBeGreaterThan(atBlur);
    pump.stop();
  });
});
