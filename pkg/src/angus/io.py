"""WAV file I/O and level utilities.

Mono PCM16 or IEEE float32 only, 8-192 kHz. Everything becomes float64
in [-1, 1] nominal range inside the package.
"""
from __future__ import annotations

import os

import numpy as np
from scipy.io import wavfile

from .core import AudioBlock
from .exceptions import CannotNormalizeError, UnsupportedFormatError

MIN_RATE = 8000
MAX_RATE = 192000
_PCM16_SCALE = 32768.0


def load_wav(path) -> AudioBlock:
    """Read a mono WAV file as float64 samples in [-1, 1]."""
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    try:
        rate, data = wavfile.read(path)
    except Exception as exc:
        raise UnsupportedFormatError(f"{path}: not a readable WAV file ({exc})") from exc
    if data.ndim != 1:
        raise UnsupportedFormatError(
            f"{path}: {data.shape[1]} channels; only mono is supported")
    if not (MIN_RATE <= rate <= MAX_RATE):
        raise UnsupportedFormatError(
            f"{path}: sample rate {rate} outside [{MIN_RATE}, {MAX_RATE}] Hz")
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / _PCM16_SCALE
    elif data.dtype == np.float32:
        samples = data.astype(np.float64)
    else:
        raise UnsupportedFormatError(
            f"{path}: dtype {data.dtype}; only 16-bit PCM and 32-bit float are supported")
    return AudioBlock(samples, int(rate))


def save_wav(block: AudioBlock, path, format: str = "float32") -> None:
    """Write a block as 'float32' (lossless round trip) or 'pcm16'."""
    if format == "float32":
        wavfile.write(path, block.sample_rate, block.samples.astype(np.float32))
    elif format == "pcm16":
        clipped = np.clip(block.samples, -1.0, 1.0 - 1.0 / _PCM16_SCALE)
        ints = np.round(clipped * _PCM16_SCALE).astype(np.int16)
        wavfile.write(path, block.sample_rate, ints)
    else:
        raise ValueError(f"format must be 'float32' or 'pcm16', got {format!r}")


# ---------------------------------------------------------------------------
# Levels
# ---------------------------------------------------------------------------

def dbfs_to_rms(dbfs: float) -> float:
    """dBFS (0 dB = full-scale RMS 1.0) to linear RMS."""
    return float(10.0 ** (dbfs / 20.0))


def normalize_rms(block: AudioBlock, target_rms: float) -> AudioBlock:
    """Scale the block to the target RMS. Gain 1.0 is exactly a no-op."""
    if target_rms <= 0:
        raise ValueError(f"target_rms must be positive, got {target_rms}")
    rms = block.rms()
    if rms == 0.0:
        raise CannotNormalizeError("signal is silent; no gain can reach the target")
    return block.with_samples(block.samples * (target_rms / rms))


def trim_center(block: AudioBlock, duration_s: float) -> AudioBlock:
    """Middle duration_s seconds of the block (whole block if shorter)."""
    if duration_s <= 0:
        raise ValueError(f"duration must be positive, got {duration_s}")
    want = int(round(duration_s * block.sample_rate))
    if want >= len(block):
        return block
    lo = (len(block) - want) // 2
    return AudioBlock(block.samples[lo:lo + want], block.sample_rate,
                      block.start_time + lo / block.sample_rate)
