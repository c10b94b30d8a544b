"""Voice-quality measurement: pulse detection, local jitter, local shimmer.

Pulses are located by pitch-guided peak picking (one peak per pitch
period, searched in a [0.8, 1.25] x period window after the previous
pulse) with parabolic sub-sample refinement of both peak time and peak
amplitude. The refinement matters: at 200 Hz / 44.1 kHz a period is
220.5 samples, and integer-sample pulse times alone would read as
~0.45% jitter on a perfectly periodic signal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AudioBlock
from .exceptions import InsufficientDataError, InsufficientPeriodicityError
from .pitch import PitchConfig, PitchEstimate, smooth_track, track_pitch

# Clinical reference points: measurements above these are in the range
# reported for pathological voices.
PATHOLOGICAL_JITTER = 0.01040
PATHOLOGICAL_SHIMMER = 0.038

# A pulse chain breaks when the nearest voiced pitch frame is farther
# away than this; detection then restarts at the next voiced region.
_COVERAGE_SLACK_S = 0.05


@dataclass(frozen=True)
class PulseSeries:
    """Per-period glottal-pulse instants and peak amplitudes."""
    times: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "times", np.asarray(self.times, dtype=np.float64))
        object.__setattr__(self, "amplitudes",
                           np.asarray(self.amplitudes, dtype=np.float64))
        if self.times.shape != self.amplitudes.shape or self.times.ndim != 1:
            raise ValueError("times and amplitudes must be 1-D and the same length")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("pulse times must be strictly increasing")
        if np.any(self.amplitudes <= 0):
            raise ValueError("pulse amplitudes must be positive")

    def __len__(self) -> int:
        return len(self.times)

    def periods(self) -> np.ndarray:
        return np.diff(self.times)


@dataclass(frozen=True)
class VoiceReport:
    local_jitter: float
    local_shimmer: float
    n_pulses: int
    mean_f0: float
    jitter_threshold: float = PATHOLOGICAL_JITTER
    shimmer_threshold: float = PATHOLOGICAL_SHIMMER

    def __post_init__(self):
        if self.local_jitter < 0 or self.local_shimmer < 0:
            raise ValueError("jitter and shimmer are non-negative")

    @property
    def local_jitter_pct(self) -> float:
        return 100.0 * self.local_jitter

    @property
    def local_shimmer_pct(self) -> float:
        return 100.0 * self.local_shimmer

    @property
    def jitter_pathological(self) -> bool:
        return self.local_jitter > self.jitter_threshold

    @property
    def shimmer_pathological(self) -> bool:
        return self.local_shimmer > self.shimmer_threshold


# ---------------------------------------------------------------------------
# Pulse detection
# ---------------------------------------------------------------------------

def _refine_peak(x: np.ndarray, j: int, sample_rate: int) -> tuple[float, float]:
    """Sub-sample peak time (seconds) and height via parabolic fit at x[j]."""
    if j <= 0 or j >= len(x) - 1:
        return j / sample_rate, float(x[j])
    a, b, c = x[j - 1], x[j], x[j + 1]
    denom = a - 2.0 * b + c
    if denom >= 0:
        return j / sample_rate, float(b)
    shift = 0.5 * (a - c) / denom
    shift = float(np.clip(shift, -0.5, 0.5))
    height = b - 0.25 * (a - c) * shift
    return (j + shift) / sample_rate, float(height)


def detect_pulses(signal: AudioBlock, f0_track) -> PulseSeries:
    """One pulse per pitch period: the largest peak in each expected window.

    The window after a pulse at time p with local period T is
    [p + 0.8 T, p + 1.25 T], tolerant to cycle-to-cycle wobble. Chains
    start at the first voiced frame (absolute maximum over two periods)
    and restart after voicing gaps.
    """
    voiced = [(e.time, e.f0_hz) for e in f0_track if e.voiced]
    if len(voiced) == 0:
        raise InsufficientPeriodicityError("no voiced frames in the pitch track")
    v_times = np.array([t for t, _ in voiced])
    v_f0 = np.array([f for _, f in voiced])

    x = signal.samples
    # Work on positive peaks; flip once if the recording is negative-peaked.
    if -np.min(x) > np.max(x):
        x = -x
    sr = signal.sample_rate
    n = len(x)

    def local_f0(t: float) -> float:
        return float(v_f0[np.argmin(np.abs(v_times - t))])

    def covered(t: float) -> bool:
        return bool(np.min(np.abs(v_times - t)) <= _COVERAGE_SLACK_S)

    def anchor_after(t: float) -> float | None:
        """First pulse of a chain: scan voiced frames at or after t until a
        two-period window has a positive maximum that is a true local peak
        of the signal. Maxima that keep rising past the window edge are
        tails of a peak outside it; a later frame sees that peak whole."""
        for t0 in v_times[v_times >= t - 1e-12]:
            period = 1.0 / local_f0(float(t0))
            lo = max(0, int(np.floor(t0 * sr)))
            hi = min(n, int(np.ceil((t0 + 2.0 * period) * sr)))
            if hi - lo < 3:
                continue
            j = lo + int(np.argmax(x[lo:hi]))
            if 0 < j < n - 1 and x[j] > 0 and x[j] >= x[j - 1] and x[j] >= x[j + 1]:
                return float(j)
        return None

    times: list[float] = []
    amps: list[float] = []
    j_anchor = anchor_after(float(v_times[0]))
    if j_anchor is not None:
        t_peak, a_peak = _refine_peak(x, int(j_anchor), sr)
        if a_peak > 0:
            times.append(t_peak)
            amps.append(a_peak)

    while times:
        period = 1.0 / local_f0(times[-1])
        lo = int(np.floor((times[-1] + 0.8 * period) * sr))
        hi = int(np.ceil((times[-1] + 1.25 * period) * sr)) + 1
        if lo >= n:
            break
        hi = min(hi, n)
        if hi - lo < 1:
            break
        j = lo + int(np.argmax(x[lo:hi]))
        t_peak, a_peak = _refine_peak(x, j, sr)
        if a_peak <= 0 or not covered(t_peak) or t_peak <= times[-1]:
            # Chain broken (silence or voicing gap): restart beyond it.
            j_anchor = anchor_after(times[-1] + 1.25 * period)
            if j_anchor is None or j_anchor / sr <= times[-1]:
                break
            t_peak, a_peak = _refine_peak(x, int(j_anchor), sr)
            if a_peak <= 0 or t_peak <= times[-1]:
                break
        times.append(t_peak)
        amps.append(a_peak)

    if len(times) < 3:
        raise InsufficientPeriodicityError(
            f"found {len(times)} pulses; need at least 3")
    return PulseSeries(np.array(times), np.array(amps))


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

def local_jitter(pulses: PulseSeries) -> float:
    """mean |T_{i+1} - T_i| / mean T over consecutive periods T."""
    if len(pulses) < 3:
        raise InsufficientDataError(
            f"jitter needs >= 3 pulses, got {len(pulses)}")
    periods = pulses.periods()
    return float(np.mean(np.abs(np.diff(periods))) / np.mean(periods))


def local_shimmer(pulses: PulseSeries) -> float:
    """mean |A_{i+1} - A_i| / mean A over consecutive pulse amplitudes."""
    if len(pulses) < 2:
        raise InsufficientDataError(
            f"shimmer needs >= 2 pulses, got {len(pulses)}")
    amps = pulses.amplitudes
    return float(np.mean(np.abs(np.diff(amps))) / np.mean(amps))


def analyze(signal: AudioBlock, config: PitchConfig = PitchConfig()) -> VoiceReport:
    """Pitch track -> pulses -> jitter/shimmer, as one report."""
    if signal.duration < 0.3:
        raise InsufficientDataError(
            f"recording is {signal.duration:.3f} s; need at least 0.3 s")
    track = smooth_track(track_pitch(signal, config))
    pulses = detect_pulses(signal, track)
    periods = pulses.periods()
    return VoiceReport(
        local_jitter=local_jitter(pulses),
        local_shimmer=local_shimmer(pulses),
        n_pulses=len(pulses),
        mean_f0=float(1.0 / np.mean(periods)),
    )
