"""Real-time vocal roughness transformation and voice-quality tooling.

Core chain: pitch-tracked amplitude modulation at f0/k generates pairs
of components around every harmonic; subtracting the carrier isolates
them; a high-pass at a multiple of f0 keeps the upper region; mixing by
alpha adds controllable roughness with the original signal fully
preserved. The inverse direction (smoothing real roughness away, or
grafting one voice's roughness profile onto another) works on a pulse
model measured from the recording.
"""
from .analysis import (PATHOLOGICAL_JITTER, PATHOLOGICAL_SHIMMER, PulseSeries,
                       VoiceReport, analyze, detect_pulses, local_jitter,
                       local_shimmer)
from .batch import (Manifest, SweepGrid, run_analysis, run_angus_sweep,
                    run_control_sweep)
from .control import (ControlParams, PulseModel, extract_pulse_model,
                      interpolate_model, resynthesize, transplant_profile)
from .core import (AudioBlock, BiquadCoeffs, BiquadState, OscillatorState,
                   biquad_process, concatenate_blocks, design_highpass_biquad,
                   render_modulator, split_blocks)
from .engine import (ALPHA_MAX, PAPER_DEFAULT, AngusParams, EngineState,
                     ModulatorSpec, isolate_subharmonics, modulate,
                     process_block)
from .exceptions import (CannotNormalizeError, InsufficientDataError,
                         InsufficientPeriodicityError, ModelMismatchError,
                         StartupError, UnsupportedFormatError)
from .io import dbfs_to_rms, load_wav, normalize_rms, save_wav, trim_center
from .pipeline import DEFAULT_BLOCK_SIZE, StreamingPipeline, process_stream
from .pitch import (PitchConfig, PitchEstimate, PitchTracker, estimate_f0,
                    smooth_track, track_pitch)
from .server import (LookaheadLimiter, StreamConfig, StreamSession,
                     apply_control, create_app, run_server, start_stream)

__version__ = "0.1.0"

__all__ = [
    "ALPHA_MAX", "DEFAULT_BLOCK_SIZE", "PAPER_DEFAULT",
    "PATHOLOGICAL_JITTER", "PATHOLOGICAL_SHIMMER",
    "AngusParams", "AudioBlock", "BiquadCoeffs", "BiquadState",
    "CannotNormalizeError", "ControlParams", "EngineState",
    "InsufficientDataError", "InsufficientPeriodicityError",
    "LookaheadLimiter", "Manifest", "ModelMismatchError", "ModulatorSpec",
    "OscillatorState", "PitchConfig", "PitchEstimate", "PitchTracker",
    "PulseModel", "PulseSeries", "StartupError", "StreamConfig",
    "StreamSession", "StreamingPipeline", "SweepGrid",
    "UnsupportedFormatError", "VoiceReport", "analyze", "apply_control",
    "biquad_process", "concatenate_blocks", "create_app", "dbfs_to_rms",
    "design_highpass_biquad", "detect_pulses", "estimate_f0",
    "extract_pulse_model", "interpolate_model", "isolate_subharmonics",
    "load_wav", "local_jitter", "local_shimmer", "modulate", "normalize_rms",
    "process_block", "process_stream", "render_modulator", "resynthesize",
    "run_analysis", "run_angus_sweep", "run_control_sweep", "run_server",
    "save_wav", "smooth_track", "split_blocks", "start_stream", "track_pitch",
    "transplant_profile", "trim_center",
]
