// Wire protocol types shared with the gateway. JSON text messages over a
// WebSocket; cmd_velocity is fire-and-forget, everything else is answered.

export const PROTOCOL_VERSION = 1;

export type GripperZone = 'I' | 'II' | 'III';

export interface TelemetryRecord {
  time: number;
  config: number[]; // kappa, phi, s per section: inner, middle, outer
  lengths: number[]; // required tendon path lengths L1..L9 (mm)
  tensions: number[]; // F1..F9 (N)
  spool_velocities: number[];
  gripper: [boolean, boolean, boolean, GripperZone, boolean, number];
  polyline: number[][][]; // per section, list of [x, y, z] points (mm)
  events: string[];
  clamped: boolean;
  rejected: boolean;
  total_length: number;
}

export interface HelloReply {
  type: 'hello';
  version: number;
  session_id: string;
  operator_held: boolean;
}

export interface RoleReply {
  type: 'role_granted' | 'role_denied' | 'role_released';
}

export interface AckReply {
  type: 'ack';
  command: string;
}

export interface ErrorReply {
  type: 'error';
  error: string;
  message: string;
}

export interface SnapshotMsg {
  type: 'snapshot';
  record: TelemetryRecord;
}

export type ServerMessage = HelloReply | RoleReply | AckReply | ErrorReply | SnapshotMsg;

export interface GripperRow {
  a: boolean;
  b: boolean;
  c: boolean;
  zone: GripperZone;
  d_closed: boolean;
}

export function encodeHello(): string {
  return JSON.stringify({ type: 'hello', version: PROTOCOL_VERSION });
}

export function encodeAcquireOperator(): string {
  return JSON.stringify({ type: 'acquire_operator' });
}

export function encodeReleaseOperator(): string {
  return JSON.stringify({ type: 'release_operator' });
}

export function encodeVelocity(cdot: number[]): string {
  if (cdot.length !== 9 || cdot.some((v) => !Number.isFinite(v))) {
    throw new Error(`cdot must be 9 finite numbers, got ${JSON.stringify(cdot)}`);
  }
  return JSON.stringify({ type: 'cmd_velocity', cdot });
}

export function encodeGripper(row: GripperRow): string {
  return JSON.stringify({ type: 'cmd_gripper', ...row });
}

export function encodeBallscrew(velocity: number): string {
  return JSON.stringify({ type: 'cmd_ballscrew', velocity });
}

export function encodeCalibrate(): string {
  return JSON.stringify({ type: 'calibrate' });
}

export function parseServerMessage(text: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof data !== 'object' || data === null || typeof (data as any).type !== 'string') {
    return null;
  }
  const msg = data as { type: string };
  switch (msg.type) {
    case 'hello':
    case 'role_granted':
    case 'role_denied':
    case 'role_released':
    case 'ack':
    case 'error':
      return msg as ServerMessage;
    case 'snapshot': {
      const rec = (msg as SnapshotMsg).record;
      if (!rec || !Array.isArray(rec.config) || rec.config.length !== 9) return null;
      return msg as SnapshotMsg;
    }
    default:
      return null;
  }
}

// The four commandable backbone actuation rows.
export const GRIPPER_ROWS: Record<string, GripperRow> = {
  row1: { a: true, b: true, c: true, zone: 'I', d_closed: true },
  row2: { a: false, b: true, c: true, zone: 'II', d_closed: true },
  row3: { a: false, b: false, c: true, zone: 'III', d_closed: true },
  locked: { a: false, b: false, c: false, zone: 'I', d_closed: true },
};
