"""Fundamental-frequency estimation and smoothing."""
import numpy as np
import pytest

from angus import (AudioBlock, PitchConfig, PitchEstimate, PitchTracker,
                   estimate_f0, smooth_track, track_pitch)
from angus.signals import gaussian_pulse_train, harmonic_vowel, sine, white_noise

SR = 44100
CFG = PitchConfig()


def frame_of(block, start=0):
    return AudioBlock(block.samples[start:start + CFG.frame_size],
                      block.sample_rate, start / block.sample_rate)


# ---------------------------------------------------------------------------
# Per-frame estimation
# ---------------------------------------------------------------------------

class TestEstimateF0:
    def test_pure_sine_220(self):
        est = estimate_f0(frame_of(sine(220.0, 0.1, SR, amplitude=0.5)))
        assert est.voiced
        assert est.f0_hz == pytest.approx(220.0, abs=0.5)
        assert 0.0 <= est.confidence <= 1.0

    def test_silence_is_unvoiced(self):
        est = estimate_f0(AudioBlock(np.zeros(CFG.frame_size), SR))
        assert not est.voiced
        assert est.f0_hz == 0.0

    def test_dc_is_unvoiced(self):
        est = estimate_f0(AudioBlock(0.3 * np.ones(CFG.frame_size), SR))
        assert not est.voiced

    def test_pulse_train_200(self):
        times = 0.0025 + 0.005 * np.arange(40)
        train = gaussian_pulse_train(times, np.ones(40), 0.25, SR)
        est = estimate_f0(frame_of(train, start=2048))
        assert est.voiced
        assert est.f0_hz == pytest.approx(200.0, abs=1.0)

    def test_wrong_frame_length_rejected(self):
        with pytest.raises(ValueError):
            estimate_f0(AudioBlock(np.zeros(1000), SR))

    def test_frame_too_short_for_f_min(self):
        config = PitchConfig(f_min=70.0, frame_size=1024, hop_size=256)
        with pytest.raises(ValueError, match="too short"):
            estimate_f0(AudioBlock(np.zeros(1024), SR), config)

    def test_f_max_must_be_below_nyquist(self):
        config = PitchConfig(f_max=5000.0)
        with pytest.raises(ValueError, match="Nyquist"):
            estimate_f0(AudioBlock(np.zeros(CFG.frame_size), 8000), config)

    def test_accuracy_over_random_fundamentals(self):
        # Median relative error < 1% across the whole search-range interior.
        rng = np.random.default_rng(42)
        errors = []
        for _ in range(40):
            f0 = rng.uniform(80.0, 600.0)
            vowel = harmonic_vowel(f0, 0.08, SR, n_harmonics=8)
            est = estimate_f0(frame_of(vowel))
            assert est.voiced, f"unvoiced at {f0:.1f} Hz"
            errors.append(abs(est.f0_hz - f0) / f0)
        assert np.median(errors) < 0.01

    @pytest.mark.parametrize("amplitude", [1e-4, 0.01, 0.1, 1.0])
    def test_white_noise_never_voiced(self, amplitude):
        for seed in range(5):
            noise = white_noise(0.08, SR, amplitude, seed)
            assert not estimate_f0(frame_of(noise)).voiced

    def test_voiced_estimates_stay_in_range(self):
        for f0 in (71.0, 100.0, 430.0, 795.0):
            est = estimate_f0(frame_of(sine(f0, 0.1, SR)))
            if est.voiced:
                assert CFG.f_min <= est.f0_hz <= CFG.f_max

    def test_unvoiced_estimate_must_carry_zero_f0(self):
        with pytest.raises(ValueError):
            PitchEstimate(0.0, 100.0, False, 0.5)


# ---------------------------------------------------------------------------
# Track smoothing
# ---------------------------------------------------------------------------

def _track(values, hop_s=0.01):
    return [PitchEstimate(i * hop_s, float(v), v > 0, 0.9 if v > 0 else 0.0)
            for i, v in enumerate(values)]


class TestSmoothTrack:
    def test_constant_track_unchanged(self):
        track = _track([200, 200, 200, 200])
        assert smooth_track(track) == track

    def test_single_octave_outlier_replaced(self):
        smoothed = smooth_track(_track([200, 200, 400, 200, 200]))
        assert [e.f0_hz for e in smoothed] == [200, 200, 200, 200, 200]

    def test_half_octave_outlier_replaced(self):
        smoothed = smooth_track(_track([200, 200, 100, 200, 200]))
        assert [e.f0_hz for e in smoothed] == [200, 200, 200, 200, 200]

    def test_all_unvoiced_unchanged(self):
        track = _track([0, 0, 0, 0])
        assert smooth_track(track) == track

    def test_isolated_voiced_frame_demoted(self):
        smoothed = smooth_track(_track([0, 220, 0]))
        assert not smoothed[1].voiced
        assert smoothed[1].f0_hz == 0.0

    def test_smooth_vibrato_untouched(self):
        values = [200 + 10 * np.sin(i / 3) for i in range(30)]
        track = _track(values)
        assert smooth_track(track) == track

    def test_unordered_track_rejected(self):
        track = _track([200, 200, 200])
        with pytest.raises(ValueError):
            smooth_track([track[2], track[0], track[1]])

    def test_input_not_mutated(self):
        track = _track([200, 200, 400, 200, 200])
        before = list(track)
        smooth_track(track)
        assert track == before


# ---------------------------------------------------------------------------
# Streaming tracker
# ---------------------------------------------------------------------------

class TestPitchTracker:
    def test_streaming_matches_whole_signal(self):
        vowel = harmonic_vowel(260.0, 0.5, SR)
        whole = track_pitch(vowel)
        tracker = PitchTracker(SR)
        streamed = []
        for i in range(0, len(vowel), 160):
            chunk = AudioBlock(vowel.samples[i:i + 160], SR, i / SR)
            streamed.extend(tracker.push(chunk))
        assert streamed == whole

    def test_estimates_use_bounded_lookahead(self):
        # The estimate stamped t may only appear once samples up to
        # t + frame_size exist; with hop-sized pushes it appears exactly then.
        vowel = harmonic_vowel(200.0, 0.4, SR)
        tracker = PitchTracker(SR)
        pushed = 0
        for i in range(0, len(vowel), 256):
            chunk = AudioBlock(vowel.samples[i:i + 256], SR, i / SR)
            pushed += len(chunk)
            for est in tracker.push(chunk):
                t_samples = round(est.time * SR)
                assert pushed >= t_samples + CFG.frame_size
                assert pushed - len(chunk) < t_samples + CFG.frame_size

    def test_estimate_times_advance_by_hop(self):
        vowel = harmonic_vowel(200.0, 0.3, SR)
        estimates = track_pitch(vowel)
        times = np.array([e.time for e in estimates])
        assert np.allclose(np.diff(times), CFG.hop_size / SR)

    def test_rejects_rate_mismatch(self):
        tracker = PitchTracker(SR)
        with pytest.raises(ValueError):
            tracker.push(AudioBlock(np.zeros(100), 48000))

    def test_reset_restarts_time_base(self):
        vowel = harmonic_vowel(200.0, 0.2, SR)
        tracker = PitchTracker(SR)
        first = tracker.push(vowel)
        tracker.reset()
        second = tracker.push(vowel)
        assert first == second


class TestPitchConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            PitchConfig(f_min=0.0)
        with pytest.raises(ValueError):
            PitchConfig(f_min=500.0, f_max=100.0)
        with pytest.raises(ValueError):
            PitchConfig(hop_size=4096, frame_size=2048)
