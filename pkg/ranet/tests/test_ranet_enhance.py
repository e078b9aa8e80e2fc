"""Enhancement behavior: framing, silence, checkpoints."""

import numpy as np
import pytest
import torch

from ranet import (
    AudioSignal,
    FormatError,
    ParameterError,
    Ranet,
    RanetSpec,
    enhance,
    load_checkpoint,
    save_checkpoint,
)
from ranet.spectral import HOP


def _tone(duration, freq=440.0, rate=6250.0, amp=0.2):
    t = np.arange(int(duration * rate)) / rate
    return AudioSignal(samples=amp * np.sin(2 * np.pi * freq * t), sample_rate=rate)


@pytest.mark.parametrize("duration", [1.0, 1.37, 2.0])
def test_output_length_within_one_hop(small_model, duration):
    audio = _tone(duration)
    out = enhance(audio, small_model)
    assert out.sample_rate == audio.sample_rate
    assert abs(out.samples.size - audio.samples.size) <= HOP


def test_digital_silence_stays_silent(small_model):
    audio = AudioSignal(samples=np.zeros(9000), sample_rate=6250.0)
    out = enhance(audio, small_model)
    assert np.array_equal(out.samples, np.zeros(out.samples.size))


def test_tone_passes_through_identity_model(small_model):
    audio = _tone(1.5)
    out = enhance(audio, small_model)
    n = out.samples.size
    # skip the starved edges, compare against the input over the interior
    sl = slice(512, n - 512)
    a, b = audio.samples[sl], out.samples[sl]
    corr = float(np.dot(a, b) / np.sqrt(np.dot(a, a) * np.dot(b, b)))
    assert corr > 0.8, f"correlation {corr:.3f}"


def test_rejects_wrong_rate(small_model):
    audio = AudioSignal(samples=np.zeros(16000), sample_rate=16000.0)
    with pytest.raises(ParameterError, match="resample"):
        enhance(audio, small_model)


def test_rejects_short_audio(small_model):
    audio = AudioSignal(samples=np.zeros(3000), sample_rate=6250.0)
    with pytest.raises(ParameterError, match="one second"):
        enhance(audio, small_model)


@pytest.mark.parametrize("hop", [0, 129, 31])
def test_rejects_bad_hop(small_model, hop):
    audio = _tone(1.2)
    with pytest.raises(ParameterError):
        enhance(audio, small_model, overlap_hop=hop)


def test_wider_hop_still_tiles(small_model):
    audio = _tone(1.6)
    out = enhance(audio, small_model, overlap_hop=64)
    assert abs(out.samples.size - audio.samples.size) <= HOP


def test_checkpoint_round_trip_bit_identical(small_model, tmp_path):
    audio = _tone(1.3, freq=300.0)
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, small_model, {"note": "round trip"})
    loaded, log = load_checkpoint(path)
    assert log == {"note": "round trip"}
    direct = enhance(audio, small_model)
    via_file = enhance(audio, path)
    again = enhance(audio, loaded)
    assert np.array_equal(direct.samples, via_file.samples)
    assert np.array_equal(via_file.samples, again.samples)


def test_checkpoint_rejects_garbage(tmp_path):
    path = tmp_path / "junk.ckpt"
    path.write_bytes(b"not a checkpoint at all")
    with pytest.raises(FormatError):
        load_checkpoint(path)


def test_checkpoint_rejects_digest_mismatch(small_model, tmp_path):
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, small_model)
    payload = torch.load(path, map_location="cpu", weights_only=True)
    payload["spec"] = dict(payload["spec"], residual_blocks=1)
    torch.save(payload, path)
    with pytest.raises(FormatError, match="digest mismatch"):
        load_checkpoint(path)


def test_checkpoint_rejects_foreign_weights(tmp_path):
    torch.manual_seed(0)
    spec = RanetSpec(residual_blocks=1)
    other = Ranet(RanetSpec(residual_blocks=2))
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, other)
    payload = torch.load(path, map_location="cpu", weights_only=True)
    payload["spec"] = {
        "rows": spec.rows,
        "frames": spec.frames,
        "base_kernels": spec.base_kernels,
        "down_blocks": spec.down_blocks,
        "residual_blocks": spec.residual_blocks,
    }
    payload["spec_digest"] = spec.digest()
    torch.save(payload, path)
    with pytest.raises(FormatError, match="weights do not match"):
        load_checkpoint(path)


def test_rejects_model_with_wrong_rows():
    torch.manual_seed(0)
    model = Ranet(RanetSpec(rows=64, frames=128, base_kernels=4))
    with pytest.raises(ParameterError, match="rows"):
        enhance(_tone(1.2), model)
