"""Dial an existing voice's irregularity up, down, or swap it entirely.

The pulse-model route works the other way around from modulation: it
measures where the pulses actually are, then resynthesizes the voice
with the deviations scaled by alpha_c. alpha_c=1 reproduces the
original, alpha_c=0 is a metronome version of the same voice.
"""
import os

import numpy as np

from angus import (ControlParams, analyze, extract_pulse_model,
                   interpolate_model, resynthesize, save_wav,
                   transplant_profile)
from angus.signals import gaussian_pulse_train, jittered_pulse_times

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

SR = 44100
rng = np.random.default_rng(11)

# Source: a 140 Hz voice with 2.5% random jitter baked in.
times = jittered_pulse_times(140.0, 0.8, 2.5, rng=rng)
source = gaussian_pulse_train(times, np.ones(len(times)), 0.85, SR)
model = extract_pulse_model(source)

print("alpha_c   measured jitter%")
for alpha_c in (0.0, 0.25, 0.5, 0.75, 1.0):
    shaped = interpolate_model(model, ControlParams(alpha_c=alpha_c))
    out = resynthesize(shaped, source)
    print(f"{alpha_c:7.2f}   {100 * analyze(out).local_jitter:8.3f}")
    save_wav(out, os.path.join(OUT, f"sculpted_ac{alpha_c:.2f}.wav"))

# Transplant: borrow the deviation profile of a different voice, here
# one with a slow 4% period wobble, while keeping this voice's own mean
# pitch and loudness contours.
donor_f0 = 180.0
donor_periods = (1.0 / donor_f0) * (1.0 + 0.04 * np.sin(
    np.linspace(0.0, 6.0 * np.pi, 160)))
donor_times = 0.05 + np.concatenate([[0.0], np.cumsum(donor_periods)])
donor = gaussian_pulse_train(donor_times, np.ones(len(donor_times)),
                             donor_times[-1] + 0.05, SR)
swapped = transplant_profile(model, extract_pulse_model(donor))
out = resynthesize(swapped, source)
print(f"\ntransplanted wobble -> jitter {100 * analyze(out).local_jitter:.3f}%")
save_wav(out, os.path.join(OUT, "sculpted_transplant.wav"))
print(f"files written to {OUT}")
