"""Live streaming session with a socket control plane.

Audio flows input -> pitch tracker -> engine (-> limiter on devices)
-> output on a dedicated thread. A WebSocket endpoint accepts one JSON
control message per frame (set_param / preset / get_status) and pushes
decimated telemetry frames. Parameter changes swap immutable snapshots
that the audio thread picks up at block boundaries; the audio side never
takes a lock the control plane can hold.

File endpoints (paths ending in .wav) run the exact batch pipeline with
the limiter disabled, so a file-to-file session is sample-identical to
offline processing with the same parameters.

(No postponed annotations here: the control socket's endpoint signature
must hold the real WebSocket class, which is imported lazily.)
"""
import json
import os
import threading
import time
from collections import deque
from dataclasses import dataclass, replace

import numpy as np

from .core import AudioBlock, concatenate_blocks, split_blocks
from .engine import PAPER_DEFAULT, AngusParams, ModulatorSpec
from .exceptions import StartupError
from .io import load_wav, save_wav
from .pipeline import StreamingPipeline
from .pitch import PitchConfig

TELEMETRY_HZ = 20.0
TELEMETRY_QUEUE_MAX = 256
MIN_BLOCK = 64
MAX_BLOCK = 4096

PRESETS = {
    "paper-default": PAPER_DEFAULT,
}


@dataclass(frozen=True)
class StreamConfig:
    input: str
    output: str
    sample_rate: int = 44100
    block_size: int = 512
    limiter_ceiling_dbfs: float = -1.0
    realtime_pacing: bool = False

    def __post_init__(self):
        bs = self.block_size
        if bs < MIN_BLOCK or bs > MAX_BLOCK or (bs & (bs - 1)) != 0:
            raise StartupError(
                f"block_size must be a power of two in [{MIN_BLOCK}, {MAX_BLOCK}], "
                f"got {bs}")
        if self.sample_rate <= 0:
            raise StartupError(f"sample_rate must be positive, got {self.sample_rate}")

    @property
    def file_mode(self) -> bool:
        return _is_file_endpoint(self.input) and _is_file_endpoint(self.output)


def _is_file_endpoint(endpoint: str) -> bool:
    return str(endpoint).lower().endswith(".wav")


# ---------------------------------------------------------------------------
# Output limiter (device paths only)
# ---------------------------------------------------------------------------

class LookaheadLimiter:
    """Hard ceiling with lookahead: each output sample is scaled by the
    gain needed for the loudest sample in the next few milliseconds, so
    peaks are caught before they pass. Adds exactly its lookahead as
    latency; below the ceiling it is bit-transparent."""

    def __init__(self, ceiling_dbfs: float = -1.0, lookahead_s: float = 0.005,
                 sample_rate: int = 44100):
        self.ceiling = float(10.0 ** (ceiling_dbfs / 20.0))
        # Even lookahead keeps the sliding-max window odd-sized.
        self.lookahead = max(2, 2 * round(lookahead_s * sample_rate / 2))
        self._delay = np.zeros(self.lookahead)

    def process(self, samples: np.ndarray) -> np.ndarray:
        from scipy.ndimage import maximum_filter1d
        buffered = np.concatenate([self._delay, samples])
        window = self.lookahead + 1
        # peaks[i] = max |buffered[i : i + lookahead + 1]|
        peaks = maximum_filter1d(np.abs(buffered), size=window,
                                 mode="nearest")[self.lookahead // 2:
                                                 self.lookahead // 2 + len(samples)]
        gains = np.where(peaks > self.ceiling, self.ceiling / np.maximum(peaks, 1e-30), 1.0)
        out = buffered[:len(samples)] * gains
        self._delay = buffered[len(samples):]
        return out


# ---------------------------------------------------------------------------
# Session
# ---------------------------------------------------------------------------

class StreamSession:
    """One running stream plus its control state.

    The audio thread reads `params` once per block (attribute swap is the
    whole handoff) and appends telemetry to a bounded deque, counting
    drops when the control side falls behind.
    """

    def __init__(self, config: StreamConfig, initial: AngusParams,
                 pitch_config: PitchConfig = PitchConfig()):
        self.config = config
        self.params = initial
        self.pipeline = StreamingPipeline(config.sample_rate, initial, pitch_config)
        self.telemetry: deque = deque()
        self.telemetry_drops = 0
        self.state = "idle"
        self.error: str | None = None
        self.position_s = 0.0
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        self._signal: AudioBlock | None = None  # preloaded file input

    # -- control plane -----------------------------------------------------

    def set_params(self, params: AngusParams) -> None:
        self.params = params

    def latest_telemetry(self) -> dict | None:
        try:
            return self.telemetry[-1]
        except IndexError:
            return None

    def drain_telemetry(self) -> list:
        frames = []
        while True:
            try:
                frames.append(self.telemetry.popleft())
            except IndexError:
                return frames

    # -- audio thread ------------------------------------------------------

    def start(self) -> None:
        self.state = "running"
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()

    def wait(self, timeout: float | None = None) -> str:
        if self._thread is not None:
            self._thread.join(timeout)
        return self.state

    def _emit(self, block: AudioBlock, out: AudioBlock, margin: float) -> None:
        estimate = self.pipeline.latest_estimate
        frame = {
            "type": "telemetry",
            "time": round(block.start_time, 6),
            "f0": round(estimate.f0_hz, 3),
            "voiced": bool(estimate.voiced),
            "in_rms": round(block.rms(), 6),
            "out_rms": round(out.rms(), 6),
            "margin": round(margin, 4),
            "params": params_to_dict(self.params),
        }
        if len(self.telemetry) >= TELEMETRY_QUEUE_MAX:
            self.telemetry.popleft()
            self.telemetry_drops += 1
        self.telemetry.append(frame)

    def _run(self) -> None:
        try:
            if self.config.file_mode:
                self._run_file()
            else:
                self._run_device()
            self.state = "finished" if not self._stop.is_set() else "stopped"
        except Exception as exc:
            self.error = f"{type(exc).__name__}: {exc}"
            self.state = "failed"

    def _run_file(self) -> None:
        signal = self._signal
        assert signal is not None, "file session started without preloaded input"
        config = self.config
        block_period = config.block_size / config.sample_rate
        emit_every = max(1, round(config.sample_rate / (config.block_size * TELEMETRY_HZ)))
        outputs = []
        wall_start = time.perf_counter()
        for i, block in enumerate(split_blocks(signal, config.block_size)):
            if self._stop.is_set():
                break
            t0 = time.perf_counter()
            self.pipeline.params = self.params
            out = self.pipeline.process(block)
            margin = 1.0 - (time.perf_counter() - t0) / block_period
            outputs.append(out)
            self.position_s = block.end_time
            if i % emit_every == 0:
                self._emit(block, out, margin)
            if config.realtime_pacing:
                target = wall_start + block.end_time
                lag = target - time.perf_counter()
                if lag > 0:
                    time.sleep(lag)
        if outputs:
            save_wav(concatenate_blocks(outputs), config.output)

    def _run_device(self) -> None:
        import sounddevice as sd
        config = self.config
        limiter = LookaheadLimiter(config.limiter_ceiling_dbfs,
                                   sample_rate=config.sample_rate)
        block_period = config.block_size / config.sample_rate
        emit_every = max(1, round(config.sample_rate / (config.block_size * TELEMETRY_HZ)))
        stream = sd.Stream(samplerate=config.sample_rate,
                           blocksize=config.block_size, channels=1,
                           dtype="float32",
                           device=(_device_id(config.input), _device_id(config.output)))
        position = 0
        with stream:
            i = 0
            while not self._stop.is_set():
                data, _ = stream.read(config.block_size)
                block = AudioBlock(data[:, 0].astype(np.float64),
                                   config.sample_rate,
                                   position / config.sample_rate)
                t0 = time.perf_counter()
                self.pipeline.params = self.params
                out = self.pipeline.process(block)
                limited = limiter.process(out.samples)
                margin = 1.0 - (time.perf_counter() - t0) / block_period
                stream.write(limited.astype(np.float32)[:, None])
                position += len(block)
                self.position_s = position / config.sample_rate
                if i % emit_every == 0:
                    self._emit(block, out.with_samples(limited), margin)
                i += 1


def _device_id(endpoint: str):
    try:
        return int(endpoint)
    except (TypeError, ValueError):
        return endpoint


def start_stream(config: StreamConfig, initial: AngusParams = PAPER_DEFAULT,
                 pitch_config: PitchConfig = PitchConfig()) -> StreamSession:
    """Open endpoints, then launch the audio thread; any open failure
    raises before anything runs, so there is never a partial session."""
    if _is_file_endpoint(config.input) != _is_file_endpoint(config.output):
        raise StartupError(
            "input and output must both be files or both be devices; "
            f"got {config.input!r} -> {config.output!r}")
    session = StreamSession(config, initial, pitch_config)
    if config.file_mode:
        try:
            signal = load_wav(config.input)
        except Exception as exc:
            raise StartupError(f"cannot open input: {exc}") from exc
        if signal.sample_rate != config.sample_rate:
            raise StartupError(
                f"input is {signal.sample_rate} Hz but the stream is configured "
                f"for {config.sample_rate} Hz")
        out_dir = os.path.dirname(os.path.abspath(config.output))
        if not os.path.isdir(out_dir) or not os.access(out_dir, os.W_OK):
            raise StartupError(f"cannot write output to {config.output!r}")
        session._signal = signal
    else:
        try:
            import sounddevice  # noqa: F401
        except ImportError as exc:
            raise StartupError(
                "device endpoints require the sounddevice package") from exc
    session.start()
    return session


# ---------------------------------------------------------------------------
# Control protocol
# ---------------------------------------------------------------------------

def params_to_dict(params: AngusParams) -> dict:
    first = params.modulators[0]
    return {
        "alpha": params.alpha,
        "k": first.k,
        "h": first.h,
        "bypass": params.bypass,
        "fcut_multiplier": params.fcut_multiplier,
        "unvoiced_passthrough": params.unvoiced_passthrough,
        "modulators": [{"k": m.k, "h": m.h, "gain": m.gain}
                       for m in params.modulators],
    }


def _coerce_int(value, name: str) -> int:
    if isinstance(value, bool) or float(value) != int(value):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    return int(value)


def _coerce_bool(value, name: str) -> bool:
    if not isinstance(value, bool):
        raise ValueError(f"{name} must be true or false, got {value!r}")
    return value


def updated_params(params: AngusParams, name: str, value) -> AngusParams:
    """New snapshot with one field changed; raises on anything invalid."""
    if name == "alpha":
        return replace(params, alpha=float(value))
    if name == "fcut_multiplier":
        return replace(params, fcut_multiplier=float(value))
    if name == "bypass":
        return replace(params, bypass=_coerce_bool(value, name))
    if name == "unvoiced_passthrough":
        return replace(params, unvoiced_passthrough=_coerce_bool(value, name))
    if name in ("k", "h", "gain"):
        first = params.modulators[0]
        if name == "k":
            mod = replace(first, k=_coerce_int(value, "k"))
        else:
            mod = replace(first, **{name: float(value)})
        return replace(params, modulators=(mod,) + params.modulators[1:])
    if name == "modulators":
        if not isinstance(value, list):
            raise ValueError("modulators must be a list of {k, h, gain} objects")
        return replace(params, modulators=tuple(
            ModulatorSpec(**{str(k): v for k, v in m.items()}) for m in value))
    raise ValueError(f"unknown parameter {name!r}")


def apply_control(session: StreamSession, msg: dict) -> dict:
    """Dispatch one control message; invalid messages change nothing."""
    if not isinstance(msg, dict):
        return {"ok": False, "error": "message must be a JSON object"}
    msg_type = msg.get("type")
    if msg_type == "set_param":
        try:
            params = updated_params(session.params, msg.get("name"), msg.get("value"))
        except (ValueError, TypeError) as exc:
            return {"ok": False, "error": str(exc)}
        session.set_params(params)
        return {"ok": True, "params": params_to_dict(params)}
    if msg_type == "preset":
        preset = PRESETS.get(msg.get("name"))
        if preset is None:
            return {"ok": False,
                    "error": f"unknown preset {msg.get('name')!r}; "
                             f"available: {sorted(PRESETS)}"}
        session.set_params(preset)
        return {"ok": True, "params": params_to_dict(preset)}
    if msg_type == "get_status":
        return {
            "ok": True,
            "state": session.state,
            "error": session.error,
            "position_s": session.position_s,
            "params": params_to_dict(session.params),
            "config": {
                "sample_rate": session.config.sample_rate,
                "block_size": session.config.block_size,
                "input": session.config.input,
                "output": session.config.output,
                "file_mode": session.config.file_mode,
            },
            "telemetry": session.latest_telemetry(),
            "telemetry_drops": session.telemetry_drops,
        }
    return {"ok": False, "error": f"unknown message type {msg_type!r}"}


# ---------------------------------------------------------------------------
# HTTP/WebSocket app
# ---------------------------------------------------------------------------

def create_app(session: StreamSession, ui_dir: str | None = None):
    import asyncio

    from fastapi import FastAPI, WebSocket, WebSocketDisconnect

    app = FastAPI(title="roughness-engine control")

    @app.websocket("/ws")
    async def control_socket(websocket: WebSocket):
        await websocket.accept()
        outbound: asyncio.Queue = asyncio.Queue()

        async def writer():
            while True:
                await websocket.send_text(await outbound.get())

        async def telemetry_pump():
            while True:
                for frame in session.drain_telemetry():
                    outbound.put_nowait(json.dumps(frame))
                await asyncio.sleep(1.0 / (2.0 * TELEMETRY_HZ))

        writer_task = asyncio.create_task(writer())
        pump_task = asyncio.create_task(telemetry_pump())
        try:
            while True:
                text = await websocket.receive_text()
                try:
                    msg = json.loads(text)
                except json.JSONDecodeError as exc:
                    reply = {"ok": False, "error": f"invalid JSON: {exc}"}
                else:
                    reply = apply_control(session, msg)
                outbound.put_nowait(json.dumps(reply))
        except WebSocketDisconnect:
            pass
        finally:
            writer_task.cancel()
            pump_task.cancel()

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def run_server(session: StreamSession, port: int, host: str = "127.0.0.1",
               ui_dir: str | None = None) -> None:
    import uvicorn
    uvicorn.run(create_app(session, ui_dir), host=host, port=port,
                log_level="warning")
