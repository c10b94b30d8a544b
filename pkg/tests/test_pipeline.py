"""Streaming pipeline: tracker-fed engine over block streams."""
import numpy as np
import pytest

from angus import (AngusParams, PitchEstimate, StreamingPipeline,
                   process_stream, split_blocks)
from angus.signals import harmonic_vowel

SR = 44100


class TestStreamingPipeline:
    def test_rate_mismatch_rejected(self):
        pipeline = StreamingPipeline(SR)
        with pytest.raises(ValueError):
            pipeline.process(harmonic_vowel(200.0, 0.05, 22050))

    def test_tracks_and_transforms(self):
        vowel = harmonic_vowel(220.0, 0.5, SR)
        pipeline = StreamingPipeline(SR, AngusParams(alpha=1.0))
        outs = [pipeline.process(b) for b in split_blocks(vowel, 512)]
        assert pipeline.latest_estimate.voiced
        assert pipeline.latest_estimate.f0_hz == pytest.approx(220.0, abs=1.0)
        tail = np.concatenate([o.samples for o in outs[20:]])
        src_tail = vowel.samples[20 * 512:20 * 512 + len(tail)]
        assert not np.array_equal(tail, src_tail)

    def test_pitch_override_skips_tracker(self):
        vowel = harmonic_vowel(220.0, 0.2, SR)
        override = PitchEstimate(0.0, 220.0, True, 1.0)
        pipeline = StreamingPipeline(SR, AngusParams(alpha=1.0),
                                     pitch_override=override)
        pipeline.process(vowel)
        assert not pipeline.latest_estimate.voiced  # tracker never ran

    def test_reset_restores_initial_state(self):
        vowel = harmonic_vowel(220.0, 0.3, SR)
        pipeline = StreamingPipeline(SR, AngusParams(alpha=0.75))
        first = [pipeline.process(b).samples for b in split_blocks(vowel, 512)]
        pipeline.reset()
        second = [pipeline.process(b).samples for b in split_blocks(vowel, 512)]
        for a, b in zip(first, second):
            assert np.array_equal(a, b)

    @pytest.mark.parametrize("block_size", [64, 160, 1000, 4096])
    def test_output_independent_of_blocking(self, block_size):
        # Estimates switch in at the sample where their analysis frame
        # ends, never at a block boundary, so any partition of the same
        # stream renders the identical sample sequence.
        vowel = harmonic_vowel(220.0, 0.4, SR)
        reference = process_stream(vowel, AngusParams(alpha=1.0), 512)
        other = process_stream(vowel, AngusParams(alpha=1.0), block_size)
        assert np.array_equal(reference.samples, other.samples)

    def test_estimates_apply_causally(self):
        # Nothing before the first completed analysis frame is voiced,
        # so those samples pass through untouched.
        vowel = harmonic_vowel(220.0, 0.3, SR)
        out = process_stream(vowel, AngusParams(alpha=1.0), 4096)
        frame = 2048
        assert np.array_equal(out.samples[:frame], vowel.samples[:frame])
        assert not np.array_equal(out.samples[frame:], vowel.samples[frame:])

    def test_process_stream_preserves_length(self):
        vowel = harmonic_vowel(200.0, 0.33, SR)
        out = process_stream(vowel, AngusParams(alpha=0.5), 512)
        assert len(out) == len(vowel)
        assert out.sample_rate == SR

    def test_process_stream_rejects_bad_block_size(self):
        with pytest.raises(ValueError):
            process_stream(harmonic_vowel(200.0, 0.1, SR), block_size=0)
