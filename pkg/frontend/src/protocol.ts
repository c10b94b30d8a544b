/**
 * Wire protocol for the engine's control socket.
 *
 * One JSON object per WebSocket frame in both directions. The server
 * acknowledges every command in order; telemetry frames arrive
 * interleaved and are distinguished by `type: "telemetry"`.
 */

export interface ModulatorSpec {
  k: number;
  h: number;
  gain: number;
}

/** Parameter snapshot as the server reports it (acks and telemetry). */
export interface EngineParams {
  alpha: number;
  k: number;
  h: number;
  bypass: boolean;
  fcut_multiplier: number;
  unvoiced_passthrough: boolean;
  modulators: ModulatorSpec[];
}

export type ParamValue = number | boolean | ModulatorSpec[];

export interface SetParamMsg {
  type: "set_param";
  name: string;
  value: ParamValue;
}

export interface PresetMsg {
  type: "preset";
  name: string;
}

export interface GetStatusMsg {
  type: "get_status";
}

export type ClientMsg = SetParamMsg | PresetMsg | GetStatusMsg;

export interface TelemetryFrame {
  type: "telemetry";
  time: number;
  f0: number;
  voiced: boolean;
  in_rms: number;
  out_rms: number;
  margin: number;
  params: EngineParams;
}

export interface OkReply {
  ok: true;
  params: EngineParams;
}

export interface ErrorReply {
  ok: false;
  error: string;
}

export interface StatusReply {
  ok: true;
  state: string;
  error: string | null;
  position_s: number;
  params: EngineParams;
  telemetry: TelemetryFrame | null;
  telemetry_drops: number;
}

export type Reply = OkReply | ErrorReply | StatusReply;

export function isTelemetry(msg: unknown): msg is TelemetryFrame {
  return (
    typeof msg === "object" &&
    msg !== null &&
    (msg as { type?: unknown }).type === "telemetry"
  );
}

export function isReply(msg: unknown): msg is Reply {
  return (
    typeof msg === "object" &&
    msg !== null &&
    typeof (msg as { ok?: unknown }).ok === "boolean"
  );
}

export function isStatusReply(msg: Reply): msg is StatusReply {
  return msg.ok && typeof (msg as StatusReply).state === "string";
}

/** The ranges the basic panel exposes. Advanced mode widens k and
 * unlocks the filter cutoff and per-modulator gains; the server still
 * has the final word on every value. */
export const EXPOSED_K = [2, 3, 4, 5] as const;

export interface ValidationOptions {
  advanced?: boolean;
}

/**
 * Client-side gesture validation. Returns an error string for values
 * the panel should refuse to send, or null when the gesture is fine.
 */
export function validateGesture(
  name: string,
  value: ParamValue,
  options: ValidationOptions = {},
): string | null {
  switch (name) {
    case "alpha":
      if (typeof value !== "number" || !(value >= 0 && value <= 1)) {
        return "alpha must be between 0 and 1";
      }
      return null;
    case "h":
      if (typeof value !== "number" || !(value >= 0 && value <= 1)) {
        return "h must be between 0 and 1";
      }
      return null;
    case "k":
      if (typeof value !== "number" || !Number.isInteger(value)) {
        return "k must be an integer";
      }
      if (!options.advanced && !(EXPOSED_K as readonly number[]).includes(value)) {
        return `k must be one of ${EXPOSED_K.join(", ")} (advanced mode allows more)`;
      }
      if (value < 2) {
        return "k must be at least 2";
      }
      return null;
    case "bypass":
    case "unvoiced_passthrough":
      return typeof value === "boolean" ? null : `${name} must be a boolean`;
    case "fcut_multiplier":
      if (!options.advanced) {
        return "fcut_multiplier is an advanced-mode control";
      }
      if (typeof value !== "number" || !(value > 0)) {
        return "fcut_multiplier must be a positive number";
      }
      return null;
    case "modulators": {
      if (!options.advanced) {
        return "modulators is an advanced-mode control";
      }
      if (!Array.isArray(value) || value.length === 0) {
        return "modulators must be a non-empty list";
      }
      for (const mod of value) {
        if (!Number.isInteger(mod.k) || mod.k < 2) return "every k must be an integer >= 2";
        if (!(mod.h >= 0 && mod.h <= 1)) return "every h must be between 0 and 1";
        if (!(mod.gain >= 0)) return "every gain must be >= 0";
      }
      return null;
    }
    default:
      return `unknown parameter ${name}`;
  }
}
