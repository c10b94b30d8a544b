/**
 * Panel state and its transitions, kept free of DOM and socket code.
 *
 * The one rule everything below enforces: displayed parameters are the
 * last values the *server* acknowledged, never merely the last user
 * gesture. A gesture only marks its parameter pending; the readout
 * moves when the ack (or a get_status resync) comes back.
 */
import type {
  ClientMsg,
  EngineParams,
  ParamValue,
  Reply,
  TelemetryFrame,
} from "./protocol.js";
import { isStatusReply } from "./protocol.js";

export type ConnectionStatus =
  | "disconnected"
  | "connecting"
  | "connected"
  | "error";

/** Telemetry margin below this fraction turns the deadline meter red. */
export const MARGIN_WARNING = 0.25;

export interface UiState {
  status: ConnectionStatus;
  /** Most recent connection or command failure, for the banner. */
  lastError: string | null;
  /** Last server-acknowledged snapshot; null until the first sync. */
  params: EngineParams | null;
  /** Engine run state from get_status ("running", "finished", ...). */
  engineState: string | null;
  /** Gestures sent but not yet acknowledged, by parameter name. */
  pending: Record<string, ParamValue>;
  latestTelemetry: TelemetryFrame | null;
}

export function initialState(): UiState {
  return {
    status: "disconnected",
    lastError: null,
    params: null,
    engineState: null,
    pending: {},
    latestTelemetry: null,
  };
}

export function onConnecting(state: UiState): UiState {
  return { ...state, status: "connecting" };
}

export function onConnected(state: UiState): UiState {
  return { ...state, status: "connected", lastError: null };
}

/** Socket dropped: controls freeze, nothing is pending anymore. A drop
 * on the heels of a connection error stays an error until a reconnect
 * actually succeeds. */
export function onDisconnected(state: UiState): UiState {
  const status = state.status === "error" ? "error" : "disconnected";
  return { ...state, status, pending: {} };
}

export function onConnectionError(state: UiState, message: string): UiState {
  return { ...state, status: "error", lastError: message, pending: {} };
}

/** A gesture went out: mark it pending, leave the display alone. */
export function onGesture(
  state: UiState,
  name: string,
  value: ParamValue,
): UiState {
  return { ...state, pending: { ...state.pending, [name]: value } };
}

function withoutPending(state: UiState, request: ClientMsg): Record<string, ParamValue> {
  if (request.type !== "set_param") {
    return state.pending;
  }
  const pending = { ...state.pending };
  delete pending[request.name];
  return pending;
}

/**
 * Server answered `request`. On success the acknowledged snapshot
 * becomes the displayed one; on rejection the display stays where the
 * server last confirmed it and the error surfaces in the banner.
 */
export function onReply(state: UiState, request: ClientMsg, reply: Reply): UiState {
  if (!reply.ok) {
    return {
      ...state,
      pending: withoutPending(state, request),
      lastError: reply.error,
    };
  }
  const next: UiState = {
    ...state,
    pending: withoutPending(state, request),
    params: reply.params,
    lastError: null,
  };
  if (isStatusReply(reply)) {
    next.engineState = reply.state;
    // A full resync supersedes every in-flight gesture.
    next.pending = {};
  }
  return next;
}

export function onTelemetry(state: UiState, frame: TelemetryFrame): UiState {
  return { ...state, latestTelemetry: frame };
}

/** Value a control should display: always the acknowledged one. */
export function displayedParam(
  state: UiState,
  name: keyof EngineParams,
): ParamValue | null {
  return state.params === null ? null : state.params[name];
}

export function isPending(state: UiState, name: string): boolean {
  return name in state.pending;
}

export function marginWarning(frame: TelemetryFrame): boolean {
  return frame.margin < MARGIN_WARNING;
}

/** f0 readout text; null means "render dimmed" (unvoiced). */
export function f0Display(frame: TelemetryFrame): string | null {
  return frame.voiced ? `${frame.f0.toFixed(1)} Hz` : null;
}
