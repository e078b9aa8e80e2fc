"""Analysis/resynthesis conventions the patches depend on."""

import numpy as np
import pytest

from ranet import ParameterError
from ranet.spectral import FRAME_LENGTH, HOP, PATCH_ROWS, analyze, log_magnitude, resynthesize

RATE = 6250.0


def test_round_trip_interior_exact(rng):
    x = rng.normal(size=int(1.5 * RATE))
    back = resynthesize(analyze(x))
    n = back.size
    sl = slice(FRAME_LENGTH, n - FRAME_LENGTH)
    err = np.max(np.abs(back[sl] - x[sl])) / np.max(np.abs(x[sl]))
    assert err < 1e-10


def test_tone_lands_on_expected_row():
    t = np.arange(8384) / RATE
    tone = np.sin(2 * np.pi * 1000.0 * t)
    patch = log_magnitude(analyze(tone))
    assert patch.shape == (PATCH_ROWS, 128)
    # row j holds bin j + 1; 1000 Hz sits at bin 41 of a 24.41 Hz grid
    row = int(np.argmax(patch.mean(axis=1)))
    assert row == 40


def test_analyze_rejects_bad_input():
    with pytest.raises(ParameterError):
        analyze(np.zeros((2, 400)))
    with pytest.raises(ParameterError):
        analyze(np.zeros(FRAME_LENGTH - 1))


def test_spectrum_shape_checks():
    with pytest.raises(ParameterError):
        log_magnitude(np.zeros((PATCH_ROWS, 4), dtype=complex))
    with pytest.raises(ParameterError):
        resynthesize(np.zeros((PATCH_ROWS, 4), dtype=complex))


def test_frame_hop_arithmetic(rng):
    x = rng.normal(size=FRAME_LENGTH + 5 * HOP + 3)
    spec = analyze(x)
    assert spec.shape == (PATCH_ROWS + 1, 6)


def test_patches_match_shard_producer(rng):
    """Shards and local analysis must agree on the patch convention."""
    synth = pytest.importorskip("radiosound.synth")
    samples = rng.normal(size=synth.SynthConfig().patch_samples)
    theirs = synth.patch_from_samples(samples, synth.SynthConfig())
    ours = log_magnitude(analyze(samples))
    assert ours.shape == theirs.shape
    assert np.max(np.abs(ours - theirs)) < 1e-5
