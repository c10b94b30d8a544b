/**
 * DOM wiring: sliders and meters on one side, the control socket on
 * the other, with the state module between them. This file is the only
 * one that touches the document; everything it delegates to is unit
 * tested without a browser.
 */
import type { EngineParams, ModulatorSpec, ParamValue } from "./protocol.js";
import { validateGesture } from "./protocol.js";
import { rateLimiter, type RateLimited } from "./rateLimit.js";
import { ControlSocket, type SocketLike } from "./socket.js";
import {
  f0Display,
  initialState,
  isPending,
  marginWarning,
  onConnecting,
  onConnected,
  onConnectionError,
  onDisconnected,
  onGesture,
  onReply,
  onTelemetry,
  type UiState,
} from "./state.js";

const MAX_MESSAGES_PER_SECOND = 20;

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing element #${id}`);
  return el;
}

function wsUrl(): string {
  const scheme = location.protocol === "https:" ? "wss" : "ws";
  return `${scheme}://${location.host}/ws`;
}

let ui: UiState = initialState();

function update(next: UiState): void {
  ui = next;
  render(ui);
}

const socket = new ControlSocket(
  wsUrl(),
  {
    onConnecting: () => update(onConnecting(ui)),
    onConnected: () => update(onConnected(ui)),
    onDisconnected: () => update(onDisconnected(ui)),
    onError: (message) => update(onConnectionError(ui, message)),
    onReply: (request, reply) =>
      update(onReply(ui, request ?? { type: "get_status" }, reply)),
    onTelemetry: (frame) => update(onTelemetry(ui, frame)),
  },
  (url) => new WebSocket(url) as SocketLike,
);

// One limiter per scrubbable control so a drag on alpha cannot starve h.
const limiters = new Map<string, RateLimited<ParamValue>>();

function limitedSend(name: string, value: ParamValue): void {
  let limiter = limiters.get(name);
  if (limiter === undefined) {
    limiter = rateLimiter(
      (v) => socket.send({ type: "set_param", name, value: v }),
      MAX_MESSAGES_PER_SECOND,
    );
    limiters.set(name, limiter);
  }
  limiter.push(value);
}

function gesture(name: string, value: ParamValue, direct = false): void {
  const error = validateGesture(name, value, { advanced: advancedOpen() });
  if (error !== null) {
    showBanner(error);
    return;
  }
  update(onGesture(ui, name, value));
  if (direct) {
    socket.send({ type: "set_param", name, value });
  } else {
    limitedSend(name, value);
  }
}

function advancedOpen(): boolean {
  return ($("advanced") as HTMLDetailsElement).open;
}

function showBanner(message: string): void {
  const banner = $("banner");
  banner.textContent = message;
  banner.hidden = false;
}

// ---------------------------------------------------------------------------
// Control event wiring
// ---------------------------------------------------------------------------

const alphaSlider = $("alpha") as HTMLInputElement;
const hSlider = $("h") as HTMLInputElement;
const bypassBox = $("bypass") as HTMLInputElement;
const fcutInput = $("fcut") as HTMLInputElement;
const kWideInput = $("k-wide") as HTMLInputElement;

alphaSlider.addEventListener("input", () =>
  gesture("alpha", Number(alphaSlider.value)));
hSlider.addEventListener("input", () => gesture("h", Number(hSlider.value)));
bypassBox.addEventListener("change", () =>
  gesture("bypass", bypassBox.checked, true));
for (const radio of document.querySelectorAll<HTMLInputElement>("input[name=k]")) {
  radio.addEventListener("change", () => gesture("k", Number(radio.value), true));
}
$("preset").addEventListener("click", () => {
  socket.send({ type: "preset", name: "paper-default" });
});
$("retry").addEventListener("click", () => socket.connect());
fcutInput.addEventListener("change", () =>
  gesture("fcut_multiplier", Number(fcutInput.value), true));
kWideInput.addEventListener("change", () =>
  gesture("k", Number(kWideInput.value), true));

function gainGesture(index: number, gain: number): void {
  if (ui.params === null) return;
  const modulators: ModulatorSpec[] = ui.params.modulators.map((m, i) =>
    i === index ? { ...m, gain } : { ...m });
  gesture("modulators", modulators);
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

function setSlider(input: HTMLInputElement, name: string, value: number): void {
  // Mid-drag the thumb belongs to the user; it snaps to the
  // acknowledged value once the server has spoken.
  if (!isPending(ui, name)) {
    input.value = String(value);
  }
  input.classList.toggle("pending", isPending(ui, name));
}

function renderControls(params: EngineParams): void {
  setSlider(alphaSlider, "alpha", params.alpha);
  setSlider(hSlider, "h", params.h);
  $("alpha-value").textContent =
    params.alpha.toFixed(2) + (isPending(ui, "alpha") ? " …" : "");
  $("h-value").textContent =
    params.h.toFixed(2) + (isPending(ui, "h") ? " …" : "");
  bypassBox.checked = params.bypass;
  for (const radio of document.querySelectorAll<HTMLInputElement>("input[name=k]")) {
    radio.checked = Number(radio.value) === params.k;
  }
  if (!isPending(ui, "fcut_multiplier")) {
    fcutInput.value = String(params.fcut_multiplier);
  }
  if (!isPending(ui, "k")) {
    kWideInput.value = String(params.k);
  }
  renderGains(params.modulators);
}

function renderGains(modulators: ModulatorSpec[]): void {
  const host = $("gains");
  const rows = host.querySelectorAll("input");
  if (rows.length !== modulators.length) {
    host.textContent = "";
    modulators.forEach((mod, index) => {
      const label = document.createElement("label");
      label.textContent = `gain (k=${mod.k}) `;
      const input = document.createElement("input");
      input.type = "range";
      input.min = "0";
      input.max = "2";
      input.step = "0.05";
      input.addEventListener("input", () =>
        gainGesture(index, Number(input.value)));
      label.appendChild(input);
      host.appendChild(label);
    });
  }
  if (!isPending(ui, "modulators")) {
    host.querySelectorAll("input").forEach((input, index) => {
      const mod = modulators[index];
      if (mod !== undefined) input.value = String(mod.gain);
    });
  }
}

function render(state: UiState): void {
  const dot = $("status-dot");
  dot.className = `dot ${state.status}`;
  $("status-text").textContent = state.status;
  ($("retry") as HTMLButtonElement).hidden =
    state.status !== "error" && state.status !== "disconnected";

  const banner = $("banner");
  banner.hidden = state.lastError === null;
  if (state.lastError !== null) banner.textContent = state.lastError;

  const controls = $("controls") as HTMLFieldSetElement;
  controls.disabled = state.status !== "connected" || state.params === null;
  if (state.params !== null) {
    renderControls(state.params);
  }
  $("engine-state").textContent = state.engineState ?? "";

  const frame = state.latestTelemetry;
  if (frame !== null) {
    const f0 = f0Display(frame);
    $("f0").textContent = f0 ?? `(${frame.f0.toFixed(1)} Hz)`;
    $("f0").classList.toggle("dimmed", f0 === null);
    $("voiced-dot").className = `dot ${frame.voiced ? "voiced" : "unvoiced"}`;
    ($("in-rms") as HTMLMeterElement).value = frame.in_rms;
    ($("out-rms") as HTMLMeterElement).value = frame.out_rms;
    const bar = $("margin-bar");
    bar.style.width = `${Math.max(0, Math.min(1, frame.margin)) * 100}%`;
    bar.classList.toggle("warn", marginWarning(frame));
    $("clock").textContent = `${frame.time.toFixed(1)} s`;
  }
}

render(ui);
socket.connect();
