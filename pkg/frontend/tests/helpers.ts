/** Test doubles: a scriptable socket and a hand-cranked clock. */
import type { ClientMsg } from "../src/protocol.js";
import type { Clock } from "../src/rateLimit.js";
import type { SocketLike } from "../src/socket.js";

export class FakeSocket implements SocketLike {
  sent: ClientMsg[] = [];
  closed = false;
  onopen: (() => void) | null = null;
  onmessage: ((event: { data: string }) => void) | null = null;
  onerror: (() => void) | null = null;
  onclose: (() => void) | null = null;
  /** Server-side hook: called for every message the client sends. */
  onSend: ((msg: ClientMsg) => void) | null = null;

  constructor(public readonly url: string) {}

  send(data: string): void {
    const msg = JSON.parse(data) as ClientMsg;
    this.sent.push(msg);
    this.onSend?.(msg);
  }

  close(): void {
    this.closed = true;
    // Browsers fire onclose even for locally initiated closes.
    this.onclose?.();
  }

  // What the fake server can do to the client:
  open(): void {
    this.onopen?.();
  }

  deliver(msg: unknown): void {
    if (this.closed) return;
    this.onmessage?.({ data: JSON.stringify(msg) });
  }

  deliverRaw(data: string): void {
    if (this.closed) return;
    this.onmessage?.({ data });
  }

  fail(): void {
    this.closed = true;
    this.onerror?.();
    this.onclose?.();
  }

  drop(): void {
    this.closed = true;
    this.onclose?.();
  }
}

interface PendingTimer {
  id: number;
  at: number;
  fn: () => void;
}

/** Deterministic clock: time moves only when a test advances it. */
export class ManualClock implements Clock {
  private time = 0;
  private timers: PendingTimer[] = [];
  private nextId = 1;

  now(): number {
    return this.time;
  }

  setTimeout(fn: () => void, ms: number): unknown {
    const id = this.nextId++;
    this.timers.push({ id, at: this.time + ms, fn });
    return id;
  }

  clearTimeout(handle: unknown): void {
    this.timers = this.timers.filter((t) => t.id !== handle);
  }

  /** Run every timer due within the next `ms` in firing order. */
  advance(ms: number): void {
    const target = this.time + ms;
    for (;;) {
      const due = this.timers
        .filter((t) => t.at <= target)
        .sort((a, b) => a.at - b.at)[0];
      if (due === undefined) break;
      this.timers = this.timers.filter((t) => t.id !== due.id);
      this.time = Math.max(this.time, due.at);
      due.fn();
    }
    this.time = target;
  }
}
