"""Pulse metrics on a signal where the right answer is known.

Programs a glottal-style pulse train with exactly 3% period jitter and
8% amplitude shimmer, renders it to audio, and checks that analysis
recovers both numbers from the waveform alone.
"""
import numpy as np

from angus import analyze, detect_pulses, track_pitch
from angus.signals import gaussian_pulse_train

SR = 44100
F0 = 130.0
BASE = 1.0 / F0

# Periods wander by +-delta in alternation: mean |dT| / mean T = 3%.
deviations = 0.015 * BASE * np.tile([1.0, -1.0], 40)
times = 0.05 + np.concatenate([[0.0], np.cumsum(BASE + deviations)])

# Amplitudes alternate 1.04 / 0.96: mean |dA| / mean A = 8%.
amplitudes = 1.0 + 0.04 * np.tile([1.0, -1.0], 41)[: len(times)]

train = gaussian_pulse_train(times, amplitudes, times[-1] + 0.05, SR)

series = detect_pulses(train, track_pitch(train))
print(f"programmed pulses: {len(times)}, detected: {len(series.times)}")

report = analyze(train)
print(f"jitter:  programmed 3.000%   measured {100 * report.local_jitter:.3f}%")
print(f"shimmer: programmed 8.000%   measured {100 * report.local_shimmer:.3f}%")
print(f"mean f0: {report.mean_f0:.2f} Hz (programmed {F0:.2f} Hz)")

# The report also carries the clinical-style flags: these thresholds
# mark where sustained-vowel voices start sounding disordered.
flag = lambda value, limit: "above" if value > limit else "below"
print(f"jitter is {flag(report.local_jitter, report.jitter_threshold)} the "
      f"{100 * report.jitter_threshold:.2f}% pathology threshold")
print(f"shimmer is {flag(report.local_shimmer, report.shimmer_threshold)} the "
      f"{100 * report.shimmer_threshold:.1f}% pathology threshold")
