"""Batch inference: clean up a recovered recording with a trained model.

The recording is analyzed with the training STFT conventions, swept by
sliding 128-frame windows (hop 32 by default) over the reflect-padded
log1p magnitude patch, and the network's center crops are stitched back
into a full magnitude track.  Crop width equals the hop, so crops tile
the timeline exactly and no blending is needed.  The input phase is
reattached before resynthesis; bins with zero input magnitude carry no
phase and stay silent, so digital silence passes through as silence.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import torch

from .audio import AudioSignal
from .checkpoint import load_checkpoint
from .errors import ParameterError
from .model import Ranet
from .spectral import PATCH_ROWS, analyze, log_magnitude, resynthesize

TARGET_RATE = 6250.0
_FORWARD_CHUNK = 64


def enhance(
    audio: AudioSignal,
    checkpoint: Ranet | str | Path,
    overlap_hop: int = 32,
) -> AudioSignal:
    """Denoise and bandwidth-expand ``audio`` through a trained model.

    ``checkpoint`` may be a path or an already loaded model.  The output
    covers whole analysis frames, so its length matches the input up to
    one frame hop.
    """
    model = (
        load_checkpoint(checkpoint)[0]
        if isinstance(checkpoint, (str, Path))
        else checkpoint
    )
    spec = model.spec
    if spec.rows != PATCH_ROWS:
        raise ParameterError(
            f"model expects {spec.rows} rows but analysis produces {PATCH_ROWS}"
        )
    if audio.sample_rate != TARGET_RATE:
        raise ParameterError(
            f"expected {TARGET_RATE:g} Hz audio, got {audio.sample_rate:g}; resample first"
        )
    if audio.duration < 1.0:
        raise ParameterError("need at least one second of audio")
    hop = int(overlap_hop)
    if not 1 <= hop <= spec.frames:
        raise ParameterError(f"overlap_hop must lie in [1, {spec.frames}]")
    if (spec.frames - hop) % 2:
        raise ParameterError("window length minus overlap_hop must be even")

    spectrum = analyze(audio.samples)
    patch = log_magnitude(spectrum)
    frames = patch.shape[1]
    margin = (spec.frames - hop) // 2
    crops = -(-frames // hop)
    pad_right = margin + crops * hop - frames
    if max(margin, pad_right) > frames - 1:
        raise ParameterError("audio too short for this overlap hop")
    padded = np.pad(patch, ((0, 0), (margin, pad_right)), mode="reflect")

    starts = [i * hop for i in range(crops)]
    windows = np.stack([padded[:, s : s + spec.frames] for s in starts])
    model.eval()
    pieces = []
    with torch.no_grad():
        for i in range(0, len(starts), _FORWARD_CHUNK):
            batch = torch.from_numpy(windows[i : i + _FORWARD_CHUNK, None])
            mags = model.magnitude(batch).numpy()[:, 0]
            pieces.append(mags[:, :, margin : margin + hop])
    stitched = np.concatenate(list(np.concatenate(pieces, axis=0)), axis=1)[:, :frames]

    # zero-magnitude bins have no defined phase; map them to zero output
    unit = spectrum / np.maximum(np.abs(spectrum), np.finfo(np.float64).tiny)
    shaped = np.zeros_like(spectrum)
    shaped[1:, :] = stitched.astype(np.float64) * unit[1:, :]
    return AudioSignal(samples=resynthesize(shaped), sample_rate=TARGET_RATE)


__all__ = ["enhance", "TARGET_RATE"]
