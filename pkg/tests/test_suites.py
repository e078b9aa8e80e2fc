"""Benchmark scene generators: determinism and labelled-truth invariants."""

import numpy as np
import pytest

from radiosound import simulate
from radiosound.suites import (
    build_detection_scene,
    build_detection_suite,
    build_liveness_scene,
    build_projection_scene,
    build_two_source_scene,
    gated,
    pseudo_speech,
    source_active_frames,
    source_activity,
    tone,
    tremor,
)

RATE = 6250.0


def test_tone_shape_and_amplitude():
    x = tone(0.5, RATE, 440.0)
    assert x.size == int(0.5 * RATE)
    assert np.max(np.abs(x)) <= 0.7 + 1e-12
    spec = np.abs(np.fft.rfft(x))
    assert abs(np.fft.rfftfreq(x.size, 1 / RATE)[np.argmax(spec)] - 440.0) < 3.0


def test_pseudo_speech_deterministic_and_distinct():
    a = pseudo_speech(1.0, RATE, 5)
    b = pseudo_speech(1.0, RATE, 5)
    c = pseudo_speech(1.0, RATE, 6)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.max(np.abs(a)) == pytest.approx(0.7, rel=1e-9)


def test_pseudo_speech_has_pauses_and_voicing():
    x = pseudo_speech(2.0, RATE, 7)
    frame = 256
    rms = np.array([
        np.sqrt(np.mean(x[s : s + frame] ** 2)) for s in range(0, x.size - frame, 64)
    ])
    # syllable gating at ~3.5 Hz: both loud frames and deep pauses exist
    assert rms.max() / (rms.min() + 1e-300) > 1e3
    quiet = np.mean(rms < 0.01 * rms.max())
    assert 0.1 < quiet < 0.7


def test_pseudo_speech_band_content():
    x = pseudo_speech(2.0, RATE, 8)
    spec = np.abs(np.fft.rfft(x)) ** 2
    freqs = np.fft.rfftfreq(x.size, 1 / RATE)
    voice = spec[(freqs > 100) & (freqs < 2500)].sum()
    assert voice / spec.sum() > 0.9


def test_gated_pads_silence():
    x = gated(np.ones(100), RATE, 0.01, 0.02)
    lead, tail = int(0.01 * RATE), int(0.02 * RATE)
    assert x.size == 100 + lead + tail
    assert np.all(x[:lead] == 0) and np.all(x[-tail:] == 0)


def test_tremor_band_limited():
    x = tremor(2.0, RATE, 9)
    assert np.max(np.abs(x)) == pytest.approx(1.0)
    spec = np.abs(np.fft.rfft(x)) ** 2
    freqs = np.fft.rfftfreq(x.size, 1 / RATE)
    band = spec[(freqs >= 30) & (freqs <= 65)].sum()
    assert band / spec.sum() > 0.99
    # the envelope never collapses: dominant component prevents beat nulls
    frame = 128
    rms = np.array([
        np.sqrt(np.mean(x[s : s + frame] ** 2)) for s in range(0, x.size - frame, 64)
    ])
    assert rms.min() > 0.2 * rms.max()


def test_detection_scene_layout():
    labelled = build_detection_scene(3)
    scene = labelled.scene
    assert len(scene.sources) == 1
    assert 1 <= len(scene.interferers) <= 2
    assert labelled.source_bins == (
        int(round(scene.sources[0].range_m / scene.radar.range_bin_spacing)),
    )
    again = build_detection_scene(3)
    assert again.source_bins == labelled.source_bins
    np.testing.assert_array_equal(
        again.scene.sources[0].audio.samples, scene.sources[0].audio.samples
    )
    suite = build_detection_suite(4, seed=100)
    assert len(suite) == 4
    assert len({ls.source_bins for ls in suite}) > 1


def test_detection_scene_simulates():
    labelled = build_detection_scene(4, duration=1.0)
    cir = simulate(labelled.scene)
    assert cir.data.shape[0] == 4
    energy = np.sum(np.abs(cir.data[0]) ** 2, axis=1)
    assert energy[labelled.source_bins[0]] > 0


def test_source_activity_tracks_the_gate():
    labelled = build_detection_scene(5)
    num_frames = 1 + (int(2.0 * RATE) - 256) // 64
    activity = source_activity(labelled, num_frames)
    assert activity.shape == (num_frames,)
    assert activity.max() == pytest.approx(1.0)
    assert activity.min() < 0.05  # syllable gaps
    flags = source_active_frames(labelled, num_frames)
    assert flags.dtype == bool
    assert 0.2 < flags.mean() < 0.9


def test_projection_scene_silence_is_silent():
    scene, source_bin, silent = build_projection_scene(6)
    assert len(silent) == 2
    audio = scene.sources[0].audio.samples
    rate = scene.radar.slow_time_rate
    for start, end in silent:
        assert 0 <= start < end <= audio.size
        assert np.all(audio[start:end] == 0.0)
    assert 6 <= source_bin < scene.radar.num_range_bins - 6
    assert scene.duration * rate == pytest.approx(audio.size)


def test_two_source_scene_geometry():
    scene, waves, bins = build_two_source_scene(7)
    assert len(scene.sources) == 2
    assert abs(bins[0] - bins[1]) >= 5
    for w, src in zip(waves, scene.sources):
        np.testing.assert_array_equal(w, src.audio.samples)
    assert bins == tuple(
        int(round(s.range_m / scene.radar.range_bin_spacing)) for s in scene.sources
    )


def test_liveness_scene_variants():
    live_scene, bin_live = build_liveness_scene(8, live=True)
    spoof_scene, bin_spoof = build_liveness_scene(8, live=False)
    assert bin_live == bin_spoof == 12
    live_audio = live_scene.sources[0].audio.samples
    spoof_audio = spoof_scene.sources[0].audio.samples
    spec_l = np.abs(np.fft.rfft(live_audio)) ** 2
    spec_s = np.abs(np.fft.rfft(spoof_audio)) ** 2
    freqs = np.fft.rfftfreq(live_audio.size, 1 / RATE)
    band = (freqs >= 35) & (freqs <= 60)
    assert spec_l[band].sum() / spec_l.sum() > 0.2
    assert spec_s[band].sum() / spec_s.sum() < 0.02