"""Training-data synthesis: degradation, patches, shard round trips."""

import math

import numpy as np
import pytest

from radiosound import (
    AudioSignal,
    ChannelResponse,
    ParameterError,
    StftConfig,
    save_wav,
)
from radiosound.synth import (
    PATCH_FRAMES,
    PATCH_ROWS,
    SynthConfig,
    degrade,
    load_shard,
    make_pairs,
    patch_from_samples,
    patch_to_magnitude,
    write_shards,
)
from radiosound.suites import pseudo_speech

RATE = 6250.0
FLAT = ChannelResponse(
    breakpoint_frequencies=np.array([0.0, 3000.0]),
    breakpoint_gains_db=np.array([0.0, 0.0]),
)
LOWPASS = ChannelResponse(
    breakpoint_frequencies=np.array([50.0, 500.0, 2000.0, 3000.0]),
    breakpoint_gains_db=np.array([0.0, -3.0, -12.0, -30.0]),
)


@pytest.fixture()
def audio_dir(tmp_path):
    d = tmp_path / "clips"
    d.mkdir()
    for i in range(3):
        samples = pseudo_speech(duration=2.5, rate=RATE, seed=40 + i)
        save_wav(AudioSignal(samples, RATE), d / f"clip{i}.wav")
    return d


def test_config_validation_and_digest():
    cfg = SynthConfig()
    assert cfg.patch_samples == 256 + (PATCH_FRAMES - 1) * 64
    with pytest.raises(ParameterError):
        SynthConfig(channels=())
    with pytest.raises(ParameterError):
        SynthConfig(noise_db_range=(10.0, 0.0))
    with pytest.raises(ParameterError):
        SynthConfig(stft=StftConfig(frame_length=128))
    with pytest.raises(ParameterError):
        SynthConfig(shard_size=0)
    # digest covers the generating distribution, not the draw
    assert cfg.digest() == SynthConfig().digest()
    assert cfg.digest() != SynthConfig(noise_db_range=(-5.0, 29.0)).digest()
    assert cfg.digest() != SynthConfig(channels=(FLAT,)).digest()
    assert len(cfg.digest()) == 16


def test_degrade_identity_under_flat_channel_no_noise():
    rng = np.random.default_rng(0)
    x = AudioSignal(pseudo_speech(duration=1.0, rate=RATE, seed=1), RATE)
    out = degrade(x, FLAT, None, rng)
    np.testing.assert_allclose(out.samples, x.samples, atol=1e-9)
    out_inf = degrade(x, FLAT, math.inf, rng)
    np.testing.assert_allclose(out_inf.samples, x.samples, atol=1e-9)


def test_degrade_hits_target_snr():
    rng = np.random.default_rng(2)
    x = AudioSignal(pseudo_speech(duration=4.0, rate=RATE, seed=3), RATE)
    out = degrade(x, FLAT, 10.0, rng)
    noise = out.samples - x.samples
    measured = 10 * math.log10(np.mean(x.samples**2) / np.mean(noise**2))
    assert measured == pytest.approx(10.0, abs=0.5)


def test_degrade_shapes_spectrum():
    rng = np.random.default_rng(4)
    t = np.arange(int(2 * RATE)) / RATE
    x = AudioSignal(np.sin(2 * np.pi * 2500.0 * t), RATE)
    out = degrade(x, LOWPASS, None, rng)
    core = slice(1000, 11000)
    drop = 20 * math.log10(
        np.sqrt(np.mean(out.samples[core] ** 2)) / np.sqrt(np.mean(x.samples[core] ** 2))
    )
    assert drop < -15.0  # 2.5 kHz sits far down the slope


def test_patch_round_trip():
    cfg = SynthConfig()
    rng = np.random.default_rng(5)
    seg = rng.normal(size=cfg.patch_samples)
    patch = patch_from_samples(seg, cfg)
    assert patch.shape == (PATCH_ROWS, PATCH_FRAMES)
    assert patch.dtype == np.float32
    assert patch.min() >= 0.0
    mag = patch_to_magnitude(patch)
    np.testing.assert_allclose(np.log1p(mag), patch, rtol=1e-6, atol=1e-6)
    with pytest.raises(ParameterError):
        patch_from_samples(seg[:-1], cfg)


def test_make_pairs_deterministic(audio_dir):
    cfg = SynthConfig(channels=(LOWPASS,))
    a = list(make_pairs(audio_dir, cfg, 4, seed=7))
    b = list(make_pairs(audio_dir, cfg, 4, seed=7))
    assert len(a) == 4
    for pa, pb in zip(a, b):
        np.testing.assert_array_equal(pa.degraded, pb.degraded)
        np.testing.assert_array_equal(pa.clean, pb.clean)
        assert pa.info == pb.info
    c = list(make_pairs(audio_dir, cfg, 4, seed=8))
    assert any(not np.array_equal(pa.clean, pc.clean) for pa, pc in zip(a, c))


def test_make_pairs_zero_count(audio_dir):
    assert list(make_pairs(audio_dir, SynthConfig(), 0, seed=1)) == []
    with pytest.raises(ParameterError):
        list(make_pairs(audio_dir, SynthConfig(), -1, seed=1))


def test_make_pairs_degraded_differs_from_clean(audio_dir):
    cfg = SynthConfig(channels=(LOWPASS,), noise_db_range=(5.0, 15.0))
    for pair in make_pairs(audio_dir, cfg, 3, seed=9):
        assert pair.degraded.shape == pair.clean.shape
        assert not np.array_equal(pair.degraded, pair.clean)
        assert 5.0 <= pair.info["snr_db"] <= 15.0


def test_make_pairs_missing_dir(tmp_path):
    with pytest.raises(ParameterError):
        list(make_pairs(tmp_path, SynthConfig(), 1, seed=1))


def test_shard_round_trip(audio_dir, tmp_path):
    cfg = SynthConfig(channels=(LOWPASS,), shard_size=3)
    pairs = list(make_pairs(audio_dir, cfg, 7, seed=11))
    out = tmp_path / "shards"
    paths = write_shards(iter(pairs), out, cfg, seed=11)
    assert [p.name for p in paths] == ["shard_0000.rspg", "shard_0001.rspg", "shard_0002.rspg"]
    seen = 0
    for path, expect in zip(paths, (3, 3, 1)):
        degraded, clean, meta = load_shard(path)
        assert degraded.shape == (expect, PATCH_ROWS, PATCH_FRAMES)
        assert clean.shape == degraded.shape
        assert meta["kind"] == "training_pairs"
        assert meta["count"] == expect
        assert meta["seed"] == 11
        assert meta["config_digest"] == cfg.digest()
        for j in range(expect):
            np.testing.assert_array_equal(degraded[j], pairs[seen + j].degraded)
            np.testing.assert_array_equal(clean[j], pairs[seen + j].clean)
        seen += expect


def test_load_shard_rejects_other_tensors(tmp_path):
    from radiosound import save_tensor

    path = tmp_path / "bogus.rspg"
    save_tensor(np.zeros((2, 3), dtype=np.float32), path, {"kind": "other"})
    with pytest.raises(ParameterError):
        load_shard(path)