"""Fundamental-frequency estimation and track smoothing.

Frame-based difference-function estimator (YIN-style): squared-difference
function over half the frame, cumulative-mean normalization, absolute
dip threshold, parabolic refinement of the lag minimum. Stateless per
frame; PitchTracker adds hop-synchronous streaming on top.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .core import AudioBlock

# First CMNDF dip below this is taken as the period; below it the frame is
# unambiguously periodic. Raised above the classic 0.1 so that strongly
# amplitude-modulated vowels do not lock onto the modulation rate.
ABSOLUTE_DIP_THRESHOLD = 0.15


@dataclass(frozen=True)
class PitchEstimate:
    """One frame's pitch decision. f0_hz is 0 whenever voiced is False."""
    time: float
    f0_hz: float
    voiced: bool
    confidence: float

    def __post_init__(self):
        if not self.voiced and self.f0_hz != 0.0:
            raise ValueError("unvoiced estimate must carry f0_hz = 0")


@dataclass(frozen=True)
class PitchConfig:
    f_min: float = 70.0
    f_max: float = 800.0
    frame_size: int = 2048
    hop_size: int = 256
    voicing_threshold: float = 0.35

    def __post_init__(self):
        if not (0.0 < self.f_min < self.f_max):
            raise ValueError(f"need 0 < f_min < f_max, got {self.f_min}, {self.f_max}")
        if self.frame_size < 2 or self.hop_size < 1:
            raise ValueError("frame_size and hop_size must be positive")
        if self.hop_size > self.frame_size:
            raise ValueError("hop_size must not exceed frame_size")


# ---------------------------------------------------------------------------
# Per-frame estimation
# ---------------------------------------------------------------------------

def _difference_function(x: np.ndarray, w: int, tau_max: int) -> np.ndarray:
    """d(tau) = sum_{j<w} (x[j] - x[j+tau])^2 for tau in [0, tau_max]."""
    x = np.asarray(x, dtype=np.float64)
    power = np.concatenate([[0.0], np.cumsum(x * x)])
    # corr(tau) = sum_{j<w} x[j] x[j+tau], all lags at once via convolution
    corr = fftconvolve(x, x[:w][::-1])[w - 1:w + tau_max]
    p_head = power[w]
    p_tail = power[w:w + tau_max + 1] - power[:tau_max + 1]
    return p_head + p_tail - 2.0 * corr


def _cmndf(d: np.ndarray) -> np.ndarray:
    """Cumulative-mean-normalized difference: dimensionless, d'(0) = 1."""
    out = np.ones_like(d)
    running = np.cumsum(d[1:])
    tau = np.arange(1, len(d))
    np.divide(d[1:] * tau, running, out=out[1:], where=running > 0)
    return out


def _parabolic_min(values: np.ndarray, idx: int) -> tuple[float, float]:
    """Sub-sample position and value of the minimum around values[idx]."""
    if idx <= 0 or idx >= len(values) - 1:
        return float(idx), float(values[idx])
    a, b, c = values[idx - 1], values[idx], values[idx + 1]
    denom = a - 2.0 * b + c
    if denom <= 0:
        return float(idx), float(b)
    shift = 0.5 * (a - c) / denom
    return idx + shift, b - 0.25 * (a - c) * shift


def estimate_f0(frame: AudioBlock, config: PitchConfig = PitchConfig()) -> PitchEstimate:
    """Single-frame pitch decision.

    The difference function needs lags up to one period of f_min inside
    half the frame, so frame_size must be at least 2*sample_rate/f_min.
    """
    if len(frame) != config.frame_size:
        raise ValueError(
            f"frame length {len(frame)} does not match frame_size {config.frame_size}")
    sr = frame.sample_rate
    if config.f_max >= sr / 2:
        raise ValueError(f"f_max {config.f_max} must be below Nyquist ({sr / 2})")
    if config.frame_size < 2 * sr / config.f_min:
        raise ValueError(
            f"frame_size {config.frame_size} too short for f_min {config.f_min} Hz "
            f"(need >= {2 * sr / config.f_min:.0f} samples)")

    w = config.frame_size // 2
    tau_min = int(np.ceil(sr / config.f_max))
    tau_max = min(w, int(np.floor(sr / config.f_min)))

    d = _difference_function(frame.samples, w, tau_max)
    dn = _cmndf(d)

    unvoiced = PitchEstimate(frame.start_time, 0.0, False, 0.0)
    search = dn[tau_min:tau_max + 1]
    if len(search) == 0:
        return unvoiced

    # First dip below the absolute threshold, refined to its local minimum;
    # otherwise the global minimum, gated by the voicing threshold.
    below = np.flatnonzero(search < ABSOLUTE_DIP_THRESHOLD)
    if len(below) > 0:
        tau = tau_min + below[0]
        while tau + 1 <= tau_max and dn[tau + 1] < dn[tau]:
            tau += 1
    else:
        tau = tau_min + int(np.argmin(search))
        if dn[tau] >= config.voicing_threshold:
            return unvoiced

    tau_refined, dip = _parabolic_min(dn, tau)
    f0 = float(np.clip(sr / tau_refined, config.f_min, config.f_max))
    confidence = float(np.clip(1.0 - dip, 0.0, 1.0))
    return PitchEstimate(frame.start_time, f0, True, confidence)


# ---------------------------------------------------------------------------
# Track-level smoothing
# ---------------------------------------------------------------------------

def smooth_track(estimates) -> list[PitchEstimate]:
    """Correct isolated octave errors and demote isolated voiced frames.

    A voiced frame whose neighbors are both unvoiced is treated as a
    false positive. A voiced frame whose f0 disagrees with two mutually
    consistent voiced neighbors is replaced by the median of the three,
    which repairs single-frame x2 / x0.5 jumps without touching smooth
    vibrato. Input order is preserved; input objects are not mutated.
    """
    track = list(estimates)
    if any(track[i].time > track[i + 1].time for i in range(len(track) - 1)):
        raise ValueError("estimates must be time-ordered")
    out = list(track)

    for i in range(1, len(track) - 1):
        prev, cur, nxt = track[i - 1], track[i], track[i + 1]
        if cur.voiced and not prev.voiced and not nxt.voiced:
            out[i] = PitchEstimate(cur.time, 0.0, False, cur.confidence)

    for i in range(1, len(track) - 1):
        prev, cur, nxt = out[i - 1], out[i], out[i + 1]
        if not (prev.voiced and cur.voiced and nxt.voiced):
            continue
        neighbors_agree = abs(prev.f0_hz - nxt.f0_hz) < 0.25 * prev.f0_hz
        outlier = (abs(cur.f0_hz - prev.f0_hz) > 0.25 * prev.f0_hz
                   and abs(cur.f0_hz - nxt.f0_hz) > 0.25 * nxt.f0_hz)
        if neighbors_agree and outlier:
            f0 = float(np.median([prev.f0_hz, cur.f0_hz, nxt.f0_hz]))
            out[i] = PitchEstimate(cur.time, f0, True, cur.confidence)
    return out


# ---------------------------------------------------------------------------
# Streaming tracker
# ---------------------------------------------------------------------------

class PitchTracker:
    """Hop-synchronous streaming wrapper around estimate_f0.

    Push arbitrary block sizes; estimates come out once their frame is
    complete, stamped with the frame start time. The decision stamped t
    therefore uses only samples in [t, t + frame_size), which bounds the
    estimator's lookahead. Single-owner: not safe to share across threads.
    """

    def __init__(self, sample_rate: int, config: PitchConfig = PitchConfig()):
        self.sample_rate = sample_rate
        self.config = config
        self._buffer = np.zeros(0)
        self._origin = 0  # absolute sample index of _buffer[0]
        self._primed = False

    def push(self, block: AudioBlock) -> list[PitchEstimate]:
        if block.sample_rate != self.sample_rate:
            raise ValueError(
                f"block rate {block.sample_rate} != tracker rate {self.sample_rate}")
        if not self._primed:
            # Adopt the stream's time base; later pushes are assumed gapless.
            self._origin = int(round(block.start_time * self.sample_rate))
            self._primed = True
        self._buffer = np.concatenate([self._buffer, block.samples])
        frame_size, hop = self.config.frame_size, self.config.hop_size
        estimates = []
        while len(self._buffer) >= frame_size:
            frame = AudioBlock(self._buffer[:frame_size], self.sample_rate,
                               self._origin / self.sample_rate)
            estimates.append(estimate_f0(frame, self.config))
            self._buffer = self._buffer[hop:]
            self._origin += hop
        return estimates

    def reset(self) -> None:
        self._buffer = np.zeros(0)
        self._origin = 0
        self._primed = False


def track_pitch(signal: AudioBlock, config: PitchConfig = PitchConfig()) -> list[PitchEstimate]:
    """Run the streaming tracker over a whole recording."""
    tracker = PitchTracker(signal.sample_rate, config)
    return tracker.push(signal)
