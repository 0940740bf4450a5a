// Keyboard to configuration-space command mapping.
//
// The operator selects a section (1/2/3) and drives its bend / plane /
// extend rates with held keys. Bend can be commanded either as a
// curvature rate (W/S) or as a bend-angle rate (T/G) that is converted
// through the reported arc length; both travel the same protocol. A
// command vector is emitted at a fixed cadence; losing focus emits one
// zero vector and then goes silent (client-side dead-man).

export interface RateBindings {
  curvature: number; // 1/mm/s per held key
  bendAngle: number; // rad/s per held key
  plane: number; // rad/s
  extend: number; // mm/s
}

export const DEFAULT_RATES: RateBindings = {
  curvature: 0.002,
  bendAngle: 0.15,
  plane: 0.4,
  extend: 4.0,
};

export type DiscreteAction =
  | { kind: 'gripper'; row: 'row1' | 'row2' | 'row3' | 'locked' }
  | { kind: 'calibrate' }
  | { kind: 'select'; section: 0 | 1 | 2 };

const HELD_KEYS = new Set(['KeyW', 'KeyS', 'KeyA', 'KeyD', 'KeyQ', 'KeyE', 'KeyT', 'KeyG']);

export class InputTracker {
  selected: 0 | 1 | 2 = 2; // distal by default: the section that explores
  rateScale = 1.0;
  private held = new Set<string>();

  constructor(public rates: RateBindings = DEFAULT_RATES) {}

  keydown(code: string): DiscreteAction | null {
    if (HELD_KEYS.has(code)) {
      this.held.add(code);
      return null;
    }
    switch (code) {
      case 'Digit1':
        this.selected = 0;
        return { kind: 'select', section: 0 };
      case 'Digit2':
        this.selected = 1;
        return { kind: 'select', section: 1 };
      case 'Digit3':
        this.selected = 2;
        return { kind: 'select', section: 2 };
      case 'Digit7':
        return { kind: 'gripper', row: 'row1' };
      case 'Digit8':
        return { kind: 'gripper', row: 'row2' };
      case 'Digit9':
        return { kind: 'gripper', row: 'row3' };
      case 'Digit0':
        return { kind: 'gripper', row: 'locked' };
      case 'KeyC':
        return { kind: 'calibrate' };
      default:
        return null;
    }
  }

  keyup(code: string): void {
    this.held.delete(code);
  }

  blur(): void {
    this.held.clear();
  }

  get anyHeld(): boolean {
    return this.held.size > 0;
  }

  private axis(positive: string, negative: string): number {
    let v = 0;
    if (this.held.has(positive)) v += 1;
    if (this.held.has(negative)) v -= 1;
    return v;
  }

  // The 9-vector (kappa_dot, phi_dot, s_dot per section). `arcLength` is
  // the selected section's current arc length from telemetry, used only
  // to convert a commanded bend-angle rate; no pose math happens here.
  cdot(arcLength: number | null): number[] {
    const out = new Array<number>(9).fill(0);
    const base = 3 * this.selected;
    let kappaRate = this.axis('KeyW', 'KeyS') * this.rates.curvature;
    if (arcLength !== null && arcLength > 0) {
      kappaRate += (this.axis('KeyT', 'KeyG') * this.rates.bendAngle) / arcLength;
    }
    out[base] = kappaRate * this.rateScale;
    out[base + 1] = this.axis('KeyD', 'KeyA') * this.rates.plane * this.rateScale;
    out[base + 2] = this.axis('KeyE', 'KeyQ') * this.rates.extend * this.rateScale;
    return out;
  }
}

// Periodic command emission with dead-man semantics: while focused and
// holding the operator role the current vector (zero or not) goes out
// every interval; on focus loss one zero vector is emitted, then nothing.
export class CommandPump {
  private timer: ReturnType<typeof setInterval> | null = null;
  private focused = true;

  constructor(
    private tracker: InputTracker,
    private emit: (cdot: number[]) => void,
    private arcLengthOf: () => number | null,
    public intervalMs = 33,
  ) {}

  start(): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => this.pump(), this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  pump(): void {
    if (!this.focused) return;
    this.emit(this.tracker.cdot(this.arcLengthOf()));
  }

  focusLost(): void {
    // dead-man: a final zero before silence
    this.tracker.blur();
    this.focused = false;
    this.emit(new Array(9).fill(0));
  }

  focusGained(): void {
    this.focused = true;
  }
}
