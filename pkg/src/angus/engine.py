"""Roughness transformation engine.

Per block: multiply the carrier by pitch-locked cosine modulators
(one per ModulatorSpec, at f0/k each), subtract the carrier to keep
only the spectral products, high-pass the products above
fcut_multiplier * f0, scale by alpha, and add back to the carrier:

    out = x + alpha * HP(sum_i gain_i * (x * (1 + h_i cos(2 pi f0/k_i t)) - x))

The carrier passes through untouched, so the transformation is a pure
linear enrichment; alpha = 0 is the identity. All state is explicit and
block-size invariant.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (AudioBlock, BiquadCoeffs, BiquadState, OscillatorState,
                   biquad_process, design_highpass_biquad, render_modulator)
from .pitch import PitchEstimate

ALPHA_MAX = 2.0
# Keep the last voiced pitch through brief dropouts so the modulators do
# not chirp; past this the engine treats the stream as unvoiced.
F0_HOLD_SECONDS = 0.1
# Mixing-factor changes slew linearly over this long to avoid clicks.
ALPHA_RAMP_SECONDS = 0.02
# Cutoff guard: fcut_multiplier * f0 can pass Nyquist for high pitches at
# low sample rates; the filter is clamped rather than allowed to blow up.
MAX_CUTOFF_FRACTION = 0.45


@dataclass(frozen=True)
class ModulatorSpec:
    """One modulating oscillator: frequency f0/k, depth h, output weight gain."""
    k: int = 3
    h: float = 1.0
    gain: float = 1.0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise ValueError(f"k must be an integer >= 2, got {self.k}")
        if not (0.0 <= self.h <= 1.0):
            raise ValueError(f"h must be in [0, 1], got {self.h}")
        if not (0.0 <= self.gain <= 1.0):
            raise ValueError(f"gain must be in [0, 1], got {self.gain}")


@dataclass(frozen=True)
class AngusParams:
    """Immutable engine parameter snapshot; swap whole objects between blocks."""
    alpha: float = 0.75
    modulators: tuple[ModulatorSpec, ...] = (ModulatorSpec(),)
    fcut_multiplier: float = 4.0
    bypass: bool = False
    unvoiced_passthrough: bool = True

    def __post_init__(self):
        object.__setattr__(self, "modulators", tuple(self.modulators))
        if not (0.0 <= self.alpha <= ALPHA_MAX):
            raise ValueError(f"alpha must be in [0, {ALPHA_MAX}], got {self.alpha}")
        if self.fcut_multiplier <= 0.0:
            raise ValueError(f"fcut_multiplier must be positive, got {self.fcut_multiplier}")
        if len(self.modulators) == 0:
            raise ValueError("at least one modulator is required")
        for m in self.modulators:
            if not isinstance(m, ModulatorSpec):
                raise ValueError(f"modulators must be ModulatorSpec, got {type(m)}")


PAPER_DEFAULT = AngusParams(alpha=0.75, modulators=(ModulatorSpec(k=3, h=1.0),))


@dataclass
class EngineState:
    """All mutable stream state: one oscillator per modulator, filter memory,
    the active cutoff, the pitch-hold register, and the slewed alpha."""
    oscillators: list[OscillatorState] = field(default_factory=list)
    biquad: BiquadState = field(default_factory=BiquadState)
    coeffs: BiquadCoeffs | None = None
    cutoff_hz: float = 0.0
    last_voiced_f0: float = 0.0
    last_voiced_time: float = -np.inf
    current_alpha: float | None = None
    alpha_target: float | None = None
    alpha_step: float = 0.0

    def reset(self) -> None:
        self.oscillators = []
        self.biquad = BiquadState()
        self.coeffs = None
        self.cutoff_hz = 0.0
        self.last_voiced_f0 = 0.0
        self.last_voiced_time = -np.inf
        self.current_alpha = None
        self.alpha_target = None
        self.alpha_step = 0.0


# ---------------------------------------------------------------------------
# Elementary operations
# ---------------------------------------------------------------------------

def modulate(x: AudioBlock, f0_hz: float, spec: ModulatorSpec,
             state: OscillatorState) -> AudioBlock:
    """x multiplied sample-wise by 1 + h*cos(2 pi f0/k t), phase-continuous.

    Each harmonic A_i of the carrier picks up a pair of products at
    amplitude A_i*h/2, offset by +-f0/k; the carrier itself is preserved
    at full amplitude.
    """
    mod = render_modulator(f0_hz, spec.k, spec.h, state, len(x), x.sample_rate)
    return x.with_samples(x.samples * mod.samples)


def isolate_subharmonics(y: AudioBlock, x: AudioBlock) -> AudioBlock:
    """y - x: cancels the carrier exactly, leaving only the products."""
    if len(y) != len(x):
        raise ValueError(f"length mismatch: {len(y)} vs {len(x)}")
    if y.sample_rate != x.sample_rate or y.start_time != x.start_time:
        raise ValueError("blocks are not aligned to the same stream position")
    return y.with_samples(y.samples - x.samples)


# ---------------------------------------------------------------------------
# Full per-block pipeline
# ---------------------------------------------------------------------------

def _effective_f0(pitch: PitchEstimate, block: AudioBlock, params: AngusParams,
                  state: EngineState) -> float:
    """Pitch-hold policy: returns 0 when the engine should not modulate."""
    if pitch.voiced and pitch.f0_hz > 0.0:
        state.last_voiced_f0 = pitch.f0_hz
        state.last_voiced_time = block.start_time
        return pitch.f0_hz
    if state.last_voiced_f0 <= 0.0:
        return 0.0
    if not params.unvoiced_passthrough:
        # Caller asked to keep modulating at the last known pitch.
        return state.last_voiced_f0
    if block.start_time - state.last_voiced_time <= F0_HOLD_SECONDS:
        return state.last_voiced_f0
    return 0.0


def _sync_oscillators(state: EngineState, n_modulators: int) -> None:
    while len(state.oscillators) < n_modulators:
        state.oscillators.append(OscillatorState())
    del state.oscillators[n_modulators:]


def _alpha_trajectory(state: EngineState, target: float, n: int, sample_rate: int):
    """Scalar alpha when steady; a per-sample linear ramp while slewing.

    The step is fixed when the target changes, so the trajectory is a
    straight 20 ms line independent of how the stream is blocked.
    """
    if state.current_alpha is None or state.current_alpha == target:
        state.current_alpha = target
        state.alpha_target = target
        return target
    if state.alpha_target != target:
        state.alpha_target = target
        ramp_samples = max(1, round(ALPHA_RAMP_SECONDS * sample_rate))
        state.alpha_step = (target - state.current_alpha) / ramp_samples
    traj = state.current_alpha + state.alpha_step * np.arange(1, n + 1)
    lo, hi = sorted((state.current_alpha, target))
    traj = np.clip(traj, lo, hi)
    state.current_alpha = float(traj[-1])
    return traj


def process_block(x: AudioBlock, pitch: PitchEstimate, params: AngusParams,
                  state: EngineState) -> AudioBlock:
    """One block through the full chain. Zero added latency; bypass and
    unvoiced passthrough return the input block itself (state frozen)."""
    if params.bypass or len(x) == 0:
        return x

    f0 = _effective_f0(pitch, x, params, state)
    if f0 <= 0.0:
        return x

    _sync_oscillators(state, len(params.modulators))
    residual = np.zeros(len(x))
    for spec, osc in zip(params.modulators, state.oscillators):
        products = isolate_subharmonics(modulate(x, f0, spec, osc), x)
        residual += spec.gain * products.samples

    f_cut = min(params.fcut_multiplier * f0, MAX_CUTOFF_FRACTION * x.sample_rate)
    if state.coeffs is None or f_cut != state.cutoff_hz:
        state.coeffs = design_highpass_biquad(f_cut, x.sample_rate)
        state.cutoff_hz = f_cut
    filtered = biquad_process(x.with_samples(residual), state.coeffs, state.biquad)

    alpha = _alpha_trajectory(state, params.alpha, len(x), x.sample_rate)
    return x.with_samples(x.samples + alpha * filtered.samples)
