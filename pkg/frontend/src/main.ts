// Browser entry: wires the session, keyboard input and canvas together.
// Render runs on animation frames off the latest snapshot; network
// receipt only updates the mailbox.

import { CommandPump, InputTracker } from './input.js';
import { GRIPPER_ROWS, TelemetryRecord } from './protocol.js';
import {
  bendFractions,
  DEFAULT_CAMERA,
  drawScene,
  limitFlags,
  tensionBars,
  TENSION_LIMIT,
} from './render.js';
import { SessionModel, SocketLike } from './session.js';

const SECTION_NAMES = ['inner', 'middle', 'outer'];
const DEG = Math.PI / 180;
// bend capability per section; refreshed from the gateway's /config
let thetaMax = [75 * DEG, 75 * DEG, 85 * DEG];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function gatewayUrl(): string {
  const override = new URLSearchParams(window.location.search).get('gateway');
  if (override) return override;
  const proto = window.location.protocol === 'https:' ? 'wss' : 'ws';
  const host = window.location.hostname || '127.0.0.1';
  return `${proto}://${host}:8750/ws`;
}

async function fetchBendLimits(wsUrl: string): Promise<void> {
  try {
    const httpBase = wsUrl.replace(/^ws/, 'http').replace(/\/ws$/, '');
    const res = await fetch(`${httpBase}/config`);
    if (!res.ok) return;
    const cfg = await res.json();
    thetaMax = ['inner', 'middle', 'outer'].map(
      (k) => cfg.geometry[k].theta_max_deg * DEG,
    );
  } catch {
    /* keep the defaults */
  }
}

function main(): void {
  const canvas = el<HTMLCanvasElement>('scene');
  const ctx = canvas.getContext('2d')!;
  const statusBadge = el<HTMLSpanElement>('status');
  const roleBadge = el<HTMLSpanElement>('role');
  const totalLabel = el<HTMLSpanElement>('total-length');
  const gripperLabel = el<HTMLSpanElement>('gripper');
  const ballscrewLabel = el<HTMLSpanElement>('ballscrew');
  const selectedLabel = el<HTMLSpanElement>('selected');
  const tensionsBox = el<HTMLDivElement>('tensions');
  const limitsBox = el<HTMLDivElement>('limits');

  const bars: HTMLDivElement[] = [];
  for (let i = 0; i < 9; i++) {
    const holder = document.createElement('div');
    holder.className = 'bar-holder';
    const bar = document.createElement('div');
    bar.className = 'bar';
    const cap = document.createElement('div');
    cap.className = 'bar-cap';
    cap.title = `${TENSION_LIMIT} N`;
    holder.appendChild(bar);
    holder.appendChild(cap);
    tensionsBox.appendChild(holder);
    bars.push(bar);
  }

  const wsUrl = gatewayUrl();
  void fetchBendLimits(wsUrl);
  const session = new SessionModel({
    onConnection: (up) => {
      statusBadge.textContent = up ? 'connected' : 'disconnected';
      statusBadge.className = up ? 'badge ok' : 'badge bad';
    },
    onRole: (operator) => {
      roleBadge.textContent = operator ? 'operator' : 'observer';
      roleBadge.className = operator ? 'badge ok' : 'badge';
    },
    onServerError: (error, message) => console.warn(`gateway: ${error}: ${message}`),
  });
  session.attach(new WebSocket(wsUrl) as unknown as SocketLike);

  const tracker = new InputTracker();
  const pump = new CommandPump(
    tracker,
    (cdot) => session.sendVelocity(cdot),
    () => {
      const rec = session.latest;
      return rec ? rec.config[3 * tracker.selected + 2] : null;
    },
  );
  pump.start();

  window.addEventListener('keydown', (ev) => {
    if (ev.repeat) return;
    const action = tracker.keydown(ev.code);
    if (!action) return;
    if (action.kind === 'gripper') session.sendGripper(GRIPPER_ROWS[action.row]);
    else if (action.kind === 'calibrate') session.sendCalibrate();
    else if (action.kind === 'select') {
      selectedLabel.textContent = SECTION_NAMES[action.section];
    }
  });
  window.addEventListener('keyup', (ev) => tracker.keyup(ev.code));
  window.addEventListener('blur', () => pump.focusLost());
  window.addEventListener('focus', () => pump.focusGained());
  el<HTMLButtonElement>('acquire').addEventListener('click', () => session.acquireOperator());
  el<HTMLButtonElement>('release').addEventListener('click', () => session.releaseOperator());

  function paintPanels(rec: TelemetryRecord): void {
    totalLabel.textContent = `${rec.total_length.toFixed(1)} mm`;
    const [a, b, c, zone, dClosed, pos] = rec.gripper;
    const flag = (open: boolean) => (open ? 'open' : 'closed');
    gripperLabel.textContent = `a ${flag(a)} | b ${flag(b)} | c ${flag(c)} | d ${
      dClosed ? 'closed' : 'open'
    } @ ${zone}`;
    ballscrewLabel.textContent = `${pos.toFixed(1)} mm`;
    tensionBars(rec.tensions).forEach((bar, i) => {
      bars[i].style.height = `${Math.round(bar.frac * 100)}%`;
      bars[i].className = bar.saturated ? 'bar saturated' : 'bar';
      bars[i].title = `L${i + 1}: ${rec.tensions[i].toFixed(2)} N`;
    });
    const flags = limitFlags(rec);
    const bends = bendFractions(rec, thetaMax);
    limitsBox.innerHTML = '';
    SECTION_NAMES.forEach((name, i) => {
      const chip = document.createElement('span');
      chip.textContent = `${name} ${Math.round(bends[i] * 100)}%`;
      chip.className = (flags as any)[name] || bends[i] >= 1 ? 'chip hit' : 'chip';
      limitsBox.appendChild(chip);
    });
  }

  let lastDrawn = -1;
  function frame(): void {
    const rec = session.latest;
    if (rec && rec.time !== lastDrawn) {
      drawScene(ctx, rec, DEFAULT_CAMERA, canvas.width, canvas.height);
      paintPanels(rec);
      lastDrawn = rec.time;
    } else if (!session.connected) {
      statusBadge.textContent = 'disconnected';
      statusBadge.className = 'badge bad';
    }
    requestAnimationFrame(frame);
  }
  requestAnimationFrame(frame);
}

window.addEventListener('DOMContentLoaded', main);
