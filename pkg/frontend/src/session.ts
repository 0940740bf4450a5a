// Gateway session: connection state, the operator role, and a
// latest-value snapshot mailbox. Commands are emitted only while the
// operator role is held; everything else is dropped silently.

import {
  encodeAcquireOperator,
  encodeBallscrew,
  encodeCalibrate,
  encodeGripper,
  encodeHello,
  encodeReleaseOperator,
  encodeVelocity,
  GripperRow,
  parseServerMessage,
  ServerMessage,
  TelemetryRecord,
} from './protocol.js';

// Minimal socket surface so the session runs on the browser WebSocket in
// production and on the `ws` package (or a fake) in tests.
export interface SocketLike {
  send(data: string): void;
  close(): void;
  set onmessage(handler: (event: { data: unknown }) => void);
  set onopen(handler: () => void);
  set onclose(handler: () => void);
}

export interface SessionHooks {
  onSnapshot?: (record: TelemetryRecord) => void;
  onRole?: (operator: boolean) => void;
  onConnection?: (connected: boolean) => void;
  onServerError?: (error: string, message: string) => void;
}

export class SessionModel {
  connected = false;
  operator = false;
  sessionId: string | null = null;
  latest: TelemetryRecord | null = null;
  snapshotsSeen = 0;
  snapshotsDropped = 0;

  private socket: SocketLike | null = null;

  constructor(private hooks: SessionHooks = {}) {}

  attach(socket: SocketLike): void {
    this.socket = socket;
    socket.onopen = () => {
      this.connected = true;
      this.hooks.onConnection?.(true);
      socket.send(encodeHello());
    };
    socket.onclose = () => {
      this.connected = false;
      this.operator = false;
      this.hooks.onConnection?.(false);
      this.hooks.onRole?.(false);
    };
    socket.onmessage = (event) => {
      if (typeof event.data === 'string') this.handleText(event.data);
      else if (event.data != null) this.handleText(String(event.data));
    };
  }

  handleText(text: string): void {
    const msg = parseServerMessage(text);
    if (msg === null) return; // malformed frames never break the console
    this.handleMessage(msg);
  }

  handleMessage(msg: ServerMessage): void {
    switch (msg.type) {
      case 'hello':
        this.sessionId = msg.session_id;
        break;
      case 'role_granted':
        this.operator = true;
        this.hooks.onRole?.(true);
        break;
      case 'role_denied':
        this.operator = false;
        this.hooks.onRole?.(false);
        break;
      case 'role_released':
        this.operator = false;
        this.hooks.onRole?.(false);
        break;
      case 'snapshot':
        // latest-value semantics: an unrendered snapshot is overwritten
        if (this.latest !== null && this.latest.time >= msg.record.time) {
          this.snapshotsDropped += 1;
          return;
        }
        this.latest = msg.record;
        this.snapshotsSeen += 1;
        this.hooks.onSnapshot?.(msg.record);
        break;
      case 'error':
        this.hooks.onServerError?.(msg.error, msg.message);
        break;
      case 'ack':
        break;
    }
  }

  acquireOperator(): void {
    this.socket?.send(encodeAcquireOperator());
  }

  releaseOperator(): void {
    this.socket?.send(encodeReleaseOperator());
  }

  // Command emitters: silent no-ops unless the operator role is held.

  sendVelocity(cdot: number[]): boolean {
    if (!this.operator || !this.connected || this.socket === null) return false;
    this.socket.send(encodeVelocity(cdot));
    return true;
  }

  sendGripper(row: GripperRow): boolean {
    if (!this.operator || !this.connected || this.socket === null) return false;
    this.socket.send(encodeGripper(row));
    return true;
  }

  sendBallscrew(velocity: number): boolean {
    if (!this.operator || !this.connected || this.socket === null) return false;
    this.socket.send(encodeBallscrew(velocity));
    return true;
  }

  sendCalibrate(): boolean {
    if (!this.operator || !this.connected || this.socket === null) return false;
    this.socket.send(encodeCalibrate());
    return true;
  }

  close(): void {
    this.socket?.close();
  }
}
