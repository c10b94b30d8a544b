import { describe, expect, it } from "vitest";

import type {
  ClientMsg,
  EngineParams,
  Reply,
  TelemetryFrame,
} from "../src/protocol.js";
import { rateLimiter } from "../src/rateLimit.js";
import { ControlSocket } from "../src/socket.js";
import * as st from "../src/state.js";
import { FakeSocket, ManualClock } from "./helpers.js";

const PARAMS: EngineParams = {
  alpha: 0.75,
  k: 3,
  h: 1.0,
  bypass: false,
  fcut_multiplier: 4.0,
  unvoiced_passthrough: true,
  modulators: [{ k: 3, h: 1.0, gain: 1.0 }],
};

/** The state loop from main.ts, minus the DOM. */
function harness(clock = new ManualClock()) {
  let ui = st.initialState();
  const sockets: FakeSocket[] = [];
  const replies: Array<{ request: ClientMsg | null; reply: Reply }> = [];
  const frames: TelemetryFrame[] = [];
  const control = new ControlSocket(
    "ws://test/ws",
    {
      onConnecting: () => { ui = st.onConnecting(ui); },
      onConnected: () => { ui = st.onConnected(ui); },
      onDisconnected: () => { ui = st.onDisconnected(ui); },
      onError: (message) => { ui = st.onConnectionError(ui, message); },
      onReply: (request, reply) => {
        replies.push({ request, reply });
        ui = st.onReply(ui, request ?? { type: "get_status" }, reply);
      },
      onTelemetry: (frame) => {
        frames.push(frame);
        ui = st.onTelemetry(ui, frame);
      },
    },
    (url) => {
      const socket = new FakeSocket(url);
      sockets.push(socket);
      return socket;
    },
    1000,
    clock,
  );
  return { control, sockets, replies, frames, clock, state: () => ui };
}

/** Engine stand-in: acks set_param after one control hop, answers
 * get_status immediately, pushes telemetry every 50 ms. */
function runFakeServer(socket: FakeSocket, clock: ManualClock,
  initial: EngineParams, ackDelayMs = 5) {
  const server = { params: { ...initial } };
  socket.onSend = (msg) => {
    if (msg.type === "get_status") {
      socket.deliver({
        ok: true, state: "running", error: null, position_s: 0,
        params: server.params, telemetry: null, telemetry_drops: 0,
      });
    } else if (msg.type === "set_param") {
      clock.setTimeout(() => {
        server.params = { ...server.params, [msg.name]: msg.value };
        socket.deliver({ ok: true, params: server.params });
      }, ackDelayMs);
    }
  };
  const tick = () => {
    if (socket.closed) return;
    socket.deliver({
      type: "telemetry", time: clock.now() / 1000, f0: 220.0, voiced: true,
      in_rms: 0.3, out_rms: 0.33, margin: 0.9, params: server.params,
    } satisfies TelemetryFrame);
    clock.setTimeout(tick, 50);
  };
  clock.setTimeout(tick, 50);
  return server;
}

describe("connect handshake", () => {
  it("populates the controls with the server's actual params", () => {
    const h = harness();
    h.control.connect();
    expect(h.state().status).toBe("connecting");
    runFakeServer(h.sockets[0]!, h.clock, PARAMS);
    h.sockets[0]!.open();
    expect(h.state().status).toBe("connected");
    expect(h.state().params).toEqual(PARAMS);
    expect(h.state().engineState).toBe("running");
  });

  it("a down server leaves an error banner and no phantom controls", () => {
    const h = harness();
    h.control.connect();
    h.sockets[0]!.fail();
    expect(h.state().status).toBe("error");
    expect(h.state().lastError).toMatch(/connection failed/);
    expect(h.state().params).toBeNull();
    // retry is scheduled, not abandoned
    h.clock.advance(1000);
    expect(h.sockets.length).toBe(2);
    expect(h.state().status).toBe("connecting");
  });

  it("sending without a live socket reports failure instead of throwing", () => {
    const h = harness();
    expect(h.control.send({ type: "get_status" })).toBe(false);
  });
});

describe("message routing", () => {
  it("resolves replies against requests in order", () => {
    const h = harness();
    h.control.connect();
    h.sockets[0]!.open(); // no scripted server: get_status stays in flight
    h.control.send({ type: "set_param", name: "alpha", value: 0.5 });
    h.sockets[0]!.deliver({
      ok: true, state: "idle", error: null, position_s: 0,
      params: PARAMS, telemetry: null, telemetry_drops: 0,
    });
    h.sockets[0]!.deliver({ ok: true, params: { ...PARAMS, alpha: 0.5 } });
    expect(h.replies.map((r) => r.request?.type))
      .toEqual(["get_status", "set_param"]);
    expect(h.state().params?.alpha).toBe(0.5);
  });

  it("routes telemetry frames around the reply queue", () => {
    const h = harness();
    h.control.connect();
    h.sockets[0]!.open();
    h.sockets[0]!.deliver({
      type: "telemetry", time: 0, f0: 0, voiced: false,
      in_rms: 0, out_rms: 0, margin: 1, params: PARAMS,
    });
    expect(h.frames.length).toBe(1);
    expect(h.replies.length).toBe(0); // get_status still pending
  });

  it("unparseable server JSON becomes a visible error", () => {
    const h = harness();
    h.control.connect();
    h.sockets[0]!.open();
    h.sockets[0]!.deliverRaw("{oops");
    expect(h.state().lastError).toMatch(/JSON/);
  });
});

describe("round trip", () => {
  it("a gesture is acknowledged and visible in telemetry within 200 ms", () => {
    const h = harness();
    h.control.connect();
    runFakeServer(h.sockets[0]!, h.clock, PARAMS);
    h.sockets[0]!.open();
    h.clock.advance(120); // stream audibly live, telemetry flowing

    const limiter = rateLimiter<number>(
      (value) => h.control.send({ type: "set_param", name: "alpha", value }),
      20, h.clock);
    const t0 = h.clock.now();
    limiter.push(0.25); // the drag's leading edge
    let ackAt: number | null = null;
    let reflectedAt: number | null = null;
    const poll = () => {
      if (ackAt === null && h.replies.some((r) =>
        r.request?.type === "set_param" && r.reply.ok)) {
        ackAt = h.clock.now();
      }
      if (reflectedAt === null && h.frames.some((f) => f.params.alpha === 0.25)) {
        reflectedAt = h.clock.now();
      }
      h.clock.setTimeout(poll, 1);
    };
    poll();
    h.clock.advance(200);

    expect(ackAt).not.toBeNull();
    expect(ackAt! - t0).toBeLessThan(200);
    expect(reflectedAt).not.toBeNull();
    expect(reflectedAt! - t0).toBeLessThan(200);
    expect(st.displayedParam(h.state(), "alpha")).toBe(0.25);
  });

  it("the drag's trailing value still lands within budget", () => {
    const h = harness();
    h.control.connect();
    runFakeServer(h.sockets[0]!, h.clock, PARAMS);
    h.sockets[0]!.open();
    h.clock.advance(100);

    const limiter = rateLimiter<number>(
      (value) => h.control.send({ type: "set_param", name: "alpha", value }),
      20, h.clock);
    const t0 = h.clock.now();
    for (let i = 0; i <= 30; i++) {
      limiter.push(0.5 + i / 100); // scrub up to 0.80
      h.clock.advance(3);
    }
    h.clock.advance(200);
    expect(st.displayedParam(h.state(), "alpha")).toBe(0.8);
    const lastAck = h.replies.filter((r) => r.request?.type === "set_param").length;
    expect(lastAck).toBeLessThanOrEqual(Math.ceil(30 * 0.3) + 1); // rate limited
    expect(h.clock.now() - t0).toBeLessThanOrEqual(300);
  });
});

describe("reconnect after a drop", () => {
  it("resynchronizes state from get_status on the new socket", () => {
    const h = harness();
    h.control.connect();
    runFakeServer(h.sockets[0]!, h.clock, PARAMS);
    h.sockets[0]!.open();
    expect(h.state().params?.alpha).toBe(0.75);

    h.sockets[0]!.drop();
    expect(h.state().status).toBe("disconnected");

    h.clock.advance(1000); // retry timer
    expect(h.sockets.length).toBe(2);
    // server restarted with different params; panel must adopt them
    runFakeServer(h.sockets[1]!, h.clock, { ...PARAMS, alpha: 0.2, k: 5 });
    h.sockets[1]!.open();
    expect(h.state().status).toBe("connected");
    expect(h.state().params?.alpha).toBe(0.2);
    expect(h.state().params?.k).toBe(5);
    expect(h.state().pending).toEqual({});
  });

  it("a user-initiated close does not reconnect", () => {
    const h = harness();
    h.control.connect();
    h.sockets[0]!.open();
    h.control.close();
    h.clock.advance(5000);
    expect(h.sockets.length).toBe(1);
  });
});
