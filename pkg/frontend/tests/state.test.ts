import { describe, expect, it } from "vitest";

import type { EngineParams, StatusReply, TelemetryFrame } from "../src/protocol.js";
import {
  displayedParam,
  f0Display,
  initialState,
  isPending,
  marginWarning,
  onConnectionError,
  onDisconnected,
  onGesture,
  onReply,
  onTelemetry,
} from "../src/state.js";

const PARAMS: EngineParams = {
  alpha: 0.75,
  k: 3,
  h: 1.0,
  bypass: false,
  fcut_multiplier: 4.0,
  unvoiced_passthrough: true,
  modulators: [{ k: 3, h: 1.0, gain: 1.0 }],
};

function frame(overrides: Partial<TelemetryFrame> = {}): TelemetryFrame {
  return {
    type: "telemetry",
    time: 1.0,
    f0: 220.0,
    voiced: true,
    in_rms: 0.3,
    out_rms: 0.33,
    margin: 0.9,
    params: PARAMS,
    ...overrides,
  };
}

function synced() {
  const status: StatusReply = {
    ok: true,
    state: "running",
    error: null,
    position_s: 0,
    params: PARAMS,
    telemetry: null,
    telemetry_drops: 0,
  };
  return onReply(initialState(), { type: "get_status" }, status);
}

describe("the displayed-equals-acknowledged rule", () => {
  it("a gesture marks the param pending but moves nothing", () => {
    const state = onGesture(synced(), "alpha", 0.25);
    expect(displayedParam(state, "alpha")).toBe(0.75);
    expect(isPending(state, "alpha")).toBe(true);
    expect(isPending(state, "h")).toBe(false);
  });

  it("the ack moves the display and settles the pending flag", () => {
    let state = onGesture(synced(), "alpha", 0.25);
    state = onReply(state, { type: "set_param", name: "alpha", value: 0.25 },
      { ok: true, params: { ...PARAMS, alpha: 0.25 } });
    expect(displayedParam(state, "alpha")).toBe(0.25);
    expect(isPending(state, "alpha")).toBe(false);
    expect(state.lastError).toBeNull();
  });

  it("a rejection leaves the display on the last confirmed value", () => {
    let state = onGesture(synced(), "alpha", 0.9);
    state = onReply(state, { type: "set_param", name: "alpha", value: 0.9 },
      { ok: false, error: "alpha must be in [0, 2]" });
    expect(displayedParam(state, "alpha")).toBe(0.75);
    expect(isPending(state, "alpha")).toBe(false);
    expect(state.lastError).toMatch(/alpha/);
  });

  it("acks settle only their own parameter", () => {
    let state = onGesture(synced(), "alpha", 0.5);
    state = onGesture(state, "h", 0.4);
    state = onReply(state, { type: "set_param", name: "alpha", value: 0.5 },
      { ok: true, params: { ...PARAMS, alpha: 0.5 } });
    expect(isPending(state, "alpha")).toBe(false);
    expect(isPending(state, "h")).toBe(true);
  });

  it("a get_status resync supersedes every in-flight gesture", () => {
    let state = onGesture(synced(), "alpha", 0.5);
    state = onGesture(state, "k", 5);
    const status: StatusReply = {
      ok: true, state: "running", error: null, position_s: 2.5,
      params: { ...PARAMS, alpha: 0.1 }, telemetry: null, telemetry_drops: 0,
    };
    state = onReply(state, { type: "get_status" }, status);
    expect(displayedParam(state, "alpha")).toBe(0.1);
    expect(state.pending).toEqual({});
    expect(state.engineState).toBe("running");
  });
});

describe("connection transitions", () => {
  it("starts with no phantom control state", () => {
    const state = initialState();
    expect(state.params).toBeNull();
    expect(state.status).toBe("disconnected");
  });

  it("an unreachable server is an error state, still without params", () => {
    const state = onConnectionError(initialState(), "connection failed");
    expect(state.status).toBe("error");
    expect(state.lastError).toMatch(/failed/);
    expect(state.params).toBeNull();
  });

  it("a drop clears pending gestures so nothing acks after reconnect", () => {
    const state = onDisconnected(onGesture(synced(), "alpha", 0.2));
    expect(state.status).toBe("disconnected");
    expect(state.pending).toEqual({});
  });
});

describe("telemetry-derived display", () => {
  it("stores the frame without touching acknowledged params", () => {
    const state = onTelemetry(synced(),
      frame({ params: { ...PARAMS, alpha: 0.1 } }));
    expect(state.latestTelemetry?.f0).toBe(220.0);
    expect(displayedParam(state, "alpha")).toBe(0.75);
  });

  it("formats f0 when voiced and dims it otherwise", () => {
    expect(f0Display(frame())).toBe("220.0 Hz");
    expect(f0Display(frame({ voiced: false, f0: 0 }))).toBeNull();
  });

  it("warns when the deadline margin drops below a quarter", () => {
    expect(marginWarning(frame({ margin: 0.9 }))).toBe(false);
    expect(marginWarning(frame({ margin: 0.25 }))).toBe(false);
    expect(marginWarning(frame({ margin: 0.249 }))).toBe(true);
  });
});
