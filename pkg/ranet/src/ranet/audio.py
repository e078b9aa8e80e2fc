"""WAV input/output on top of scipy, normalized to mono float arrays."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .errors import FormatError, ParameterError


@dataclass(frozen=True)
class AudioSignal:
    """Mono audio: float samples plus their rate in Hz."""

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ParameterError("audio samples must be one-dimensional")
        if self.sample_rate <= 0:
            raise ParameterError("sample_rate must be positive")
        object.__setattr__(self, "samples", samples)

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


def load_wav(path: str | Path) -> AudioSignal:
    """Read a WAV file; multichannel input is downmixed by averaging."""
    try:
        rate, data = wavfile.read(path)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if data.ndim == 2:
        data = data.mean(axis=1)
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise FormatError(f"{path}: unsupported sample encoding {data.dtype}")
    return AudioSignal(samples=samples, sample_rate=float(rate))


def save_wav(audio: AudioSignal, path: str | Path) -> None:
    """Write mono 32-bit float PCM."""
    wavfile.write(path, int(round(audio.sample_rate)), audio.samples.astype(np.float32))


__all__ = ["AudioSignal", "load_wav", "save_wav"]
