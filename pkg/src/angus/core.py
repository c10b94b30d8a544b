"""Streaming DSP primitives: audio blocks, biquad filters, phase-continuous oscillators.

Everything here operates on mono float64 sample buffers and is written so
that splitting a stream into blocks of any size produces the same output
as processing it in one call (state is carried explicitly).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# Audio blocks
# ---------------------------------------------------------------------------

@dataclass
class AudioBlock:
    """A fixed-length chunk of a mono audio stream.

    samples are dimensionless amplitudes (nominal range [-1, 1]),
    start_time is the stream time of the first sample in seconds.
    """
    samples: np.ndarray
    sample_rate: int
    start_time: float = 0.0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError(f"samples must be 1-D, got shape {self.samples.shape}")
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.start_time < 0:
            raise ValueError(f"start_time must be non-negative, got {self.start_time}")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    @property
    def end_time(self) -> float:
        """Start time of the next gapless block."""
        return self.start_time + self.duration

    def times(self) -> np.ndarray:
        """Per-sample timestamps in seconds."""
        return self.start_time + np.arange(len(self.samples)) / self.sample_rate

    def with_samples(self, samples: np.ndarray) -> "AudioBlock":
        """New block with the same placement but different samples."""
        return AudioBlock(samples, self.sample_rate, self.start_time)

    def rms(self) -> float:
        if len(self.samples) == 0:
            return 0.0
        return float(np.sqrt(np.mean(self.samples ** 2)))


def split_blocks(block: AudioBlock, block_size: int):
    """Iterate over consecutive sub-blocks of at most block_size samples."""
    x = block.samples
    sr = block.sample_rate
    for i in range(0, len(x), block_size):
        yield AudioBlock(x[i:i + block_size], sr, block.start_time + i / sr)


def concatenate_blocks(blocks) -> AudioBlock:
    blocks = list(blocks)
    if not blocks:
        raise ValueError("cannot concatenate zero blocks")
    samples = np.concatenate([b.samples for b in blocks])
    return AudioBlock(samples, blocks[0].sample_rate, blocks[0].start_time)


# ---------------------------------------------------------------------------
# Biquad filters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BiquadCoeffs:
    """Second-order section, denominator normalized to a0 = 1."""
    b0: float
    b1: float
    b2: float
    a1: float
    a2: float

    def as_ba(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.array([self.b0, self.b1, self.b2]),
                np.array([1.0, self.a1, self.a2]))

    def is_stable(self) -> bool:
        poles = np.roots([1.0, self.a1, self.a2])
        return bool(np.all(np.abs(poles) < 1.0))

    def response_at(self, freq_hz: float, sample_rate: int) -> complex:
        """Transfer function evaluated on the unit circle at freq_hz."""
        z = np.exp(1j * TWO_PI * freq_hz / sample_rate)
        num = self.b0 + self.b1 / z + self.b2 / z ** 2
        den = 1.0 + self.a1 / z + self.a2 / z ** 2
        return num / den


@dataclass
class BiquadState:
    """Direct-form-II-transposed delay state, float64 accumulation."""
    zi: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def reset(self) -> None:
        self.zi = np.zeros(2)


def design_highpass_biquad(f_cut_hz: float, sample_rate_hz: int,
                           q: float = 1.0 / np.sqrt(2.0)) -> BiquadCoeffs:
    """Second-order high-pass (audio-cookbook parameterization).

    Default q gives a maximally flat (Butterworth) passband with the
    -3 dB point at f_cut_hz.
    """
    nyquist = sample_rate_hz / 2.0
    if not (0.0 < f_cut_hz < nyquist):
        raise ValueError(
            f"cutoff {f_cut_hz} Hz outside (0, {nyquist}) for sample rate {sample_rate_hz}")
    if q <= 0.0:
        raise ValueError(f"q must be positive, got {q}")

    w0 = TWO_PI * f_cut_hz / sample_rate_hz
    cos_w0 = np.cos(w0)
    alpha = np.sin(w0) / (2.0 * q)

    b0 = (1.0 + cos_w0) / 2.0
    b1 = -(1.0 + cos_w0)
    b2 = (1.0 + cos_w0) / 2.0
    a0 = 1.0 + alpha
    a1 = -2.0 * cos_w0
    a2 = 1.0 - alpha

    return BiquadCoeffs(b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0)


def biquad_process(block: AudioBlock, coeffs: BiquadCoeffs,
                   state: BiquadState) -> AudioBlock:
    """Run the filter over one block, carrying state to the next call.

    Splitting a stream across calls is sample-exact: the recurrence is
    strictly sequential and the delay state is chained.
    """
    b, a = coeffs.as_ba()
    y, state.zi = lfilter(b, a, block.samples, zi=state.zi)
    return block.with_samples(y)


# ---------------------------------------------------------------------------
# Oscillators
# ---------------------------------------------------------------------------

@dataclass
class OscillatorState:
    """Phase-continuous oscillator position.

    phase is wrapped to [0, 2*pi) after every block. Internally the phase
    for sample i is computed as (anchor + step * index) mod 2*pi against a
    fixed anchor per frequency segment, so rendering 512+512 samples is
    bitwise identical to rendering 1024 at a constant frequency. Frequency
    changes fold the current phase into a new anchor (no discontinuity).
    """
    phase: float = 0.0
    frequency_hz: float = 0.0
    _anchor_phase: float = 0.0
    _index: int = 0
    _total_samples: int = 0

    def _retune(self, frequency_hz: float) -> None:
        if frequency_hz != self.frequency_hz:
            self._anchor_phase = self.phase
            self._index = 0
            self.frequency_hz = frequency_hz


def render_modulator(f0_hz: float, k: int, h: float, state: OscillatorState,
                     n: int, sample_rate: int) -> AudioBlock:
    """n samples of the modulating signal 1 + h*cos(phase).

    The modulator runs at f0_hz / k so the products it creates sit at a
    rational fraction offset of the fundamental. Output lies in
    [1 - h, 1 + h]; phase is continuous across calls and across
    frequency changes. The block's start_time counts samples rendered by
    this oscillator, so consecutive calls concatenate gaplessly.
    """
    if f0_hz <= 0.0:
        raise ValueError(f"f0 must be positive, got {f0_hz}")
    if k < 2:
        raise ValueError(f"subharmonic ratio k must be >= 2, got {k}")
    if not (0.0 <= h <= 1.0):
        raise ValueError(f"modulation depth h must be in [0, 1], got {h}")

    state._retune(f0_hz / k)
    step = TWO_PI * state.frequency_hz / sample_rate
    idx = state._index + np.arange(n)
    phases = np.mod(state._anchor_phase + step * idx, TWO_PI)
    start_time = state._total_samples / sample_rate
    out = 1.0 + h * np.cos(phases)
    state._index += n
    state._total_samples += n
    state.phase = float(np.mod(state._anchor_phase + step * state._index, TWO_PI))
    return AudioBlock(out, sample_rate, start_time)
