/**
 * One WebSocket to the engine, with ordered reply correlation.
 *
 * The server writes replies in request order from a single writer, so
 * a FIFO of in-flight requests is all the correlation needed; anything
 * tagged `type: "telemetry"` is routed to the telemetry handler
 * instead. Drops reconnect automatically with a fresh get_status so
 * the panel resynchronizes to whatever the server now believes.
 */
import type { ClientMsg, Reply, TelemetryFrame } from "./protocol.js";
import { isReply, isTelemetry } from "./protocol.js";
import type { Clock } from "./rateLimit.js";
import { systemClock } from "./rateLimit.js";

/** The subset of the browser WebSocket this client touches. */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: string }) => void) | null;
  onerror: (() => void) | null;
  onclose: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ControlSocketHandlers {
  onConnecting(): void;
  onConnected(): void;
  onDisconnected(): void;
  onError(message: string): void;
  onReply(request: ClientMsg | null, reply: Reply): void;
  onTelemetry(frame: TelemetryFrame): void;
}

export class ControlSocket {
  private socket: SocketLike | null = null;
  private inFlight: ClientMsg[] = [];
  private closedByUser = false;
  private retryTimer: unknown = null;

  constructor(
    private readonly url: string,
    private readonly handlers: ControlSocketHandlers,
    private readonly factory: SocketFactory,
    private readonly retryDelayMs = 1000,
    private readonly clock: Clock = systemClock,
  ) {}

  connect(): void {
    this.closedByUser = false;
    this.handlers.onConnecting();
    let socket: SocketLike;
    try {
      socket = this.factory(this.url);
    } catch (error) {
      this.handlers.onError(`cannot open ${this.url}: ${String(error)}`);
      this.scheduleRetry();
      return;
    }
    this.socket = socket;
    this.inFlight = [];

    socket.onopen = () => {
      this.handlers.onConnected();
      // Resync: the server's current state populates the controls.
      this.send({ type: "get_status" });
    };
    socket.onmessage = (event) => this.route(event.data);
    socket.onerror = () => {
      this.handlers.onError("connection failed");
    };
    socket.onclose = () => {
      this.socket = null;
      this.inFlight = [];
      if (!this.closedByUser) {
        this.handlers.onDisconnected();
        this.scheduleRetry();
      }
    };
  }

  /** True when the message actually went out on a live socket. */
  send(msg: ClientMsg): boolean {
    if (this.socket === null) {
      return false;
    }
    this.inFlight.push(msg);
    this.socket.send(JSON.stringify(msg));
    return true;
  }

  close(): void {
    this.closedByUser = true;
    if (this.retryTimer !== null) {
      this.clock.clearTimeout(this.retryTimer);
      this.retryTimer = null;
    }
    this.socket?.close();
    this.socket = null;
  }

  private route(data: string): void {
    let parsed: unknown;
    try {
      parsed = JSON.parse(data);
    } catch {
      this.handlers.onError("server sent unparseable JSON");
      return;
    }
    if (isTelemetry(parsed)) {
      this.handlers.onTelemetry(parsed);
      return;
    }
    if (isReply(parsed)) {
      const request = this.inFlight.shift() ?? null;
      this.handlers.onReply(request, parsed);
    }
  }

  private scheduleRetry(): void {
    if (this.retryTimer !== null || this.closedByUser) {
      return;
    }
    this.retryTimer = this.clock.setTimeout(() => {
      this.retryTimer = null;
      this.connect();
    }, this.retryDelayMs);
  }
}
