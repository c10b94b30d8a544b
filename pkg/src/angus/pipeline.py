"""Block-streaming pipeline: pitch tracking feeding the engine.

One code path serves both offline file processing and the live server,
so batch outputs certify the real-time chain sample for sample.
"""
from __future__ import annotations

import numpy as np

from .core import AudioBlock, concatenate_blocks, split_blocks
from .engine import AngusParams, EngineState, process_block
from .pitch import PitchConfig, PitchEstimate, PitchTracker

DEFAULT_BLOCK_SIZE = 512

_NO_ESTIMATE = PitchEstimate(0.0, 0.0, False, 0.0)


class StreamingPipeline:
    """Single-owner streaming processor.

    Each pushed block first feeds the pitch tracker. A completed frame's
    estimate takes effect at the exact sample where that frame ends, so
    the block is rendered in segments around those switch points and the
    output is bitwise independent of how the stream is blocked (the
    engine itself is split-exact and holds pitch through brief unvoiced
    gaps). `params` may be swapped for a new immutable snapshot between
    blocks at any time.

    If `pitch_override` is set, the tracker is skipped entirely and the
    given estimate is used for every sample.
    """

    def __init__(self, sample_rate: int, params: AngusParams = AngusParams(),
                 pitch_config: PitchConfig = PitchConfig(),
                 pitch_override: PitchEstimate | None = None):
        self.sample_rate = sample_rate
        self.params = params
        self.pitch_override = pitch_override
        self.tracker = PitchTracker(sample_rate, pitch_config)
        self.engine_state = EngineState()
        self.latest_estimate = _NO_ESTIMATE

    def process(self, block: AudioBlock) -> AudioBlock:
        if block.sample_rate != self.sample_rate:
            raise ValueError(
                f"block rate {block.sample_rate} != pipeline rate {self.sample_rate}")
        if self.pitch_override is not None:
            return process_block(block, self.pitch_override, self.params,
                                 self.engine_state)
        n = len(block)
        if n == 0:
            return block.with_samples(np.zeros(0))
        start = int(round(block.start_time * self.sample_rate))
        frame_size = self.tracker.config.frame_size
        # An estimate stamped t was computed from samples [t, t + frame);
        # it becomes usable at the sample right after that frame.
        switches = [
            (min(max(int(round(e.time * self.sample_rate)) + frame_size
                     - start, 0), n), e)
            for e in self.tracker.push(block)
        ]
        pieces = []
        cursor = 0
        for cut, estimate in switches:
            if cut > cursor:
                pieces.append(self._render(block, start, cursor, cut))
                cursor = cut
            self.latest_estimate = estimate
        if cursor < n:
            pieces.append(self._render(block, start, cursor, n))
        return block.with_samples(np.concatenate(pieces))

    def _render(self, block: AudioBlock, start: int, lo: int, hi: int) -> np.ndarray:
        segment = AudioBlock(block.samples[lo:hi], self.sample_rate,
                             (start + lo) / self.sample_rate)
        return process_block(segment, self.latest_estimate, self.params,
                             self.engine_state).samples

    def reset(self) -> None:
        self.tracker.reset()
        self.engine_state.reset()
        self.latest_estimate = _NO_ESTIMATE


def process_stream(signal: AudioBlock, params: AngusParams = AngusParams(),
                   block_size: int = DEFAULT_BLOCK_SIZE,
                   pitch_config: PitchConfig = PitchConfig(),
                   pitch_override: PitchEstimate | None = None) -> AudioBlock:
    """Run a whole recording through the streaming pipeline."""
    if block_size < 1:
        raise ValueError(f"block_size must be positive, got {block_size}")
    pipeline = StreamingPipeline(signal.sample_rate, params, pitch_config,
                                 pitch_override)
    outputs = [pipeline.process(b) for b in split_blocks(signal, block_size)]
    if not outputs:
        return signal.with_samples(np.zeros(0))
    return concatenate_blocks(outputs)
