"""Synthetic voice-like signals for demos and measurement fixtures."""
from __future__ import annotations

import numpy as np

from .core import TWO_PI, AudioBlock


def sine(freq_hz: float, duration_s: float, sample_rate: int = 44100,
         amplitude: float = 0.5, phase: float = 0.0) -> AudioBlock:
    n = int(round(duration_s * sample_rate))
    t = np.arange(n) / sample_rate
    return AudioBlock(amplitude * np.sin(TWO_PI * freq_hz * t + phase), sample_rate)


def harmonic_vowel(f0_hz: float, duration_s: float, sample_rate: int = 44100,
                   amplitudes=None, n_harmonics: int = 10,
                   peak: float = 0.5) -> AudioBlock:
    """Steady vowel-like tone: a stack of cosine harmonics of f0.

    amplitudes[i] scales harmonic i+1; default is a 1/i rolloff, which is
    a reasonable stand-in for a sung open vowel. Peak-normalized so the
    ANGUS product (bounded by 1 + h) stays inside [-1, 1].
    """
    if amplitudes is None:
        amplitudes = [1.0 / i for i in range(1, n_harmonics + 1)]
    amplitudes = np.asarray(amplitudes, dtype=np.float64)
    n = int(round(duration_s * sample_rate))
    t = np.arange(n) / sample_rate
    x = np.zeros(n)
    for i, a in enumerate(amplitudes, start=1):
        x += a * np.cos(TWO_PI * i * f0_hz * t)
    m = np.max(np.abs(x))
    if m > 0:
        x *= peak / m
    return AudioBlock(x, sample_rate)


def gaussian_pulse_train(pulse_times_s: np.ndarray, pulse_amplitudes: np.ndarray,
                         duration_s: float, sample_rate: int = 44100,
                         width_s: float = 0.0004) -> AudioBlock:
    """Train of Gaussian bumps at prescribed times and heights.

    A stand-in for glottal pulses whose timing and amplitude are known
    exactly, so jitter/shimmer measurements can be checked against
    closed-form values. width_s is the Gaussian sigma; the default is
    narrow against vocal periods but several samples wide, which keeps
    peak interpolation accurate.
    """
    pulse_times_s = np.asarray(pulse_times_s, dtype=np.float64)
    pulse_amplitudes = np.asarray(pulse_amplitudes, dtype=np.float64)
    if pulse_times_s.shape != pulse_amplitudes.shape:
        raise ValueError("pulse times and amplitudes must have the same shape")
    n = int(round(duration_s * sample_rate))
    t = np.arange(n) / sample_rate
    x = np.zeros(n)
    # Sum only a local neighborhood of each pulse; beyond 6 sigma the
    # Gaussian is below 2e-8 and irrelevant.
    half = max(1, int(round(6.0 * width_s * sample_rate)))
    for tc, a in zip(pulse_times_s, pulse_amplitudes):
        c = int(round(tc * sample_rate))
        lo, hi = max(0, c - half), min(n, c + half + 1)
        if lo >= hi:
            continue
        x[lo:hi] += a * np.exp(-0.5 * ((t[lo:hi] - tc) / width_s) ** 2)
    return AudioBlock(x, sample_rate)


def jittered_pulse_times(f0_hz: float, duration_s: float, jitter_pct: float,
                         rng: np.random.Generator | None = None,
                         start_s: float = 0.05) -> np.ndarray:
    """Pulse times whose period perturbations average to the given local jitter.

    Perturbations are drawn zero-mean and rescaled so that
    mean(|T[i+1]-T[i]|) / mean(T) equals jitter_pct exactly.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    mean_period = 1.0 / f0_hz
    n = int((duration_s - 2 * start_s) / mean_period)
    dev = rng.standard_normal(n)
    dev -= dev.mean()
    target = jitter_pct / 100.0 * mean_period
    d = np.abs(np.diff(dev))
    if d.mean() > 0:
        dev *= target / d.mean()
    periods = mean_period + dev
    return start_s + np.concatenate([[0.0], np.cumsum(periods[:-1])])


def white_noise(duration_s: float, sample_rate: int = 44100,
                amplitude: float = 0.1, seed: int = 0) -> AudioBlock:
    rng = np.random.default_rng(seed)
    n = int(round(duration_s * sample_rate))
    return AudioBlock(amplitude * rng.standard_normal(n), sample_rate)
