"""Where the roughness comes from: look at the injected sidebands.

Modulating a pure tone with a subharmonic oscillator splits energy into
two sidebands around the carrier. This script prints the spectrum of
the modulation residual (output minus input) for each division factor
k, so you can see the sideband pair walk toward the carrier as k grows.
"""
import numpy as np

from angus import ModulatorSpec, OscillatorState, isolate_subharmonics, modulate
from angus.signals import sine

SR = 44100
F0 = 441.0

# 6000 samples of a 441 Hz carrier: every sideband 441 +- 441/k for
# k in 2..5 completes a whole number of cycles in the buffer, so each
# one occupies exactly one FFT bin and the table below stays clean.
carrier = sine(F0, 6000 / SR, SR, amplitude=0.5)


def peak_table(samples):
    spectrum = np.abs(np.fft.rfft(samples)) * 2.0 / len(samples)
    freqs = np.fft.rfftfreq(len(samples), 1.0 / SR)
    keep = spectrum > 0.01 * spectrum.max()
    return [(f, a) for f, a in zip(freqs[keep], spectrum[keep])]


for k in (2, 3, 4, 5):
    roughened = modulate(carrier, F0, ModulatorSpec(k=k, h=1.0),
                         OscillatorState())
    residual = isolate_subharmonics(roughened, carrier)
    pairs = ", ".join(f"{f:6.1f} Hz @ {a:.3f}"
                      for f, a in peak_table(residual.samples))
    print(f"k={k}:  {pairs}")

print()
print("Each line is exactly two tones at 441 -+ 441/k, amplitude 0.25")
print("(carrier amplitude 0.5 times h/2). The carrier itself cancels")
print("out of the residual to rounding error.")
