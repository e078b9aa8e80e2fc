"""Short-time Fourier analysis shared by detection, recovery, and synthesis.

Conventions, fixed across the toolkit:

* periodic Hann window, frame length a power of two (default 256), overlap
  0.75 or 0.5 (default 0.75, hop 64);
* two-sided, DC-centred frequency rows: row ``i`` holds bin ``i - N//2``;
* ``istft`` uses weighted overlap-add with a per-sample window-power
  denominator, so ``istft(stft(x))`` reproduces every fully covered sample.

The window/hop pairs satisfy the constant-overlap-add condition for the
squared window, so interior reconstruction is exact to rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .types import CirFrameSeries, RangeDopplerSpectrogram


@dataclass(frozen=True)
class StftConfig:
    frame_length: int = 256
    overlap: float = 0.75

    def __post_init__(self) -> None:
        n = self.frame_length
        if n < 4 or (n & (n - 1)) != 0:
            raise ParameterError("frame_length must be a power of two >= 4")
        if self.overlap not in (0.5, 0.75):
            raise ParameterError("overlap must be 0.5 or 0.75")

    @property
    def hop(self) -> int:
        return int(round(self.frame_length * (1.0 - self.overlap)))


def periodic_hann(n: int) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def num_frames(num_samples: int, config: StftConfig) -> int:
    if num_samples < config.frame_length:
        raise ParameterError("signal shorter than one frame")
    return 1 + (num_samples - config.frame_length) // config.hop


def frequency_bins(config: StftConfig) -> np.ndarray:
    """Signed bin indices for each spectrogram row, -N/2 .. N/2-1."""
    n = config.frame_length
    return np.arange(n) - n // 2


def stft(x: np.ndarray, config: StftConfig = StftConfig()) -> np.ndarray:
    """Two-sided STFT of a real or complex 1-D signal.

    Returns:
        Complex array [frame_length, num_frames]; rows are DC-centred
        (``np.fft.fftshift`` order along the frequency axis).
    """
    x = np.asarray(x)
    if x.ndim != 1:
        raise ParameterError("stft expects a one-dimensional signal")
    n, hop = config.frame_length, config.hop
    k = num_frames(x.size, config)
    idx = np.arange(n)[None, :] + hop * np.arange(k)[:, None]
    frames = x[idx] * periodic_hann(n)[None, :]
    spec = np.fft.fftshift(np.fft.fft(frames, axis=1), axes=1)
    return spec.T


def istft(spec: np.ndarray, config: StftConfig = StftConfig()) -> np.ndarray:
    """Weighted overlap-add inverse of :func:`stft`.

    Samples whose accumulated window power is below a tenth of the interior
    value (the first and last few dozen samples) are returned as zero: their
    reconstruction would divide by a vanishing weight, which amplifies any
    spectral modification made between analysis and synthesis into boundary
    spikes orders of magnitude above the signal.

    Returns:
        Complex signal of length ``frame_length + (num_frames - 1) * hop``.
        Callers reconstructing real signals take the real part themselves.
    """
    spec = np.asarray(spec)
    if spec.ndim != 2 or spec.shape[0] != config.frame_length:
        raise ParameterError("spectrogram must be [frame_length, num_frames]")
    n, hop = config.frame_length, config.hop
    k = spec.shape[1]
    win = periodic_hann(n)
    frames = np.fft.ifft(np.fft.ifftshift(spec, axes=0), axis=0).T * win[None, :]

    length = n + (k - 1) * hop
    out = np.zeros(length, dtype=np.complex128)
    weight = np.zeros(length, dtype=np.float64)
    w2 = win * win
    for i in range(k):
        start = i * hop
        out[start : start + n] += frames[i]
        weight[start : start + n] += w2
    covered = weight >= 0.1 * weight.max()
    out[covered] /= weight[covered]
    out[~covered] = 0.0
    return out


def range_doppler(
    cir: CirFrameSeries, config: StftConfig = StftConfig()
) -> RangeDopplerSpectrogram:
    """STFT of every (receiver, range bin) slow-time series."""
    receivers, bins, samples = cir.data.shape
    k = num_frames(samples, config)
    n, hop = config.frame_length, config.hop
    win = periodic_hann(n)
    idx = np.arange(n)[None, :] + hop * np.arange(k)[:, None]
    out = np.empty((receivers, n, bins, k), dtype=np.complex128)
    for r in range(receivers):
        frames = cir.data[r][:, idx] * win[None, None, :]  # [bin, frame, n]
        spec = np.fft.fftshift(np.fft.fft(frames, axis=2), axes=2)
        out[r] = np.transpose(spec, (2, 0, 1))
    return RangeDopplerSpectrogram(
        data=out, params=cir.params, frame_length=n, hop=hop
    )


def one_sided_magnitude(spec: np.ndarray, rows: int | None = None) -> np.ndarray:
    """Fold a two-sided DC-centred spectrogram to positive-frequency magnitude.

    The DC row is dropped and the Nyquist row kept as the top row, so a
    frame length of 2R yields exactly R rows covering bins 1..R.  Row ``j``
    holds bin ``j + 1``.
    """
    spec = np.asarray(spec)
    n = spec.shape[0]
    half = n // 2
    if rows is None:
        rows = half
    if rows != half:
        raise ParameterError("one-sided fold must keep frame_length/2 rows")
    positive = np.abs(spec[half + 1 :, ...])  # bins 1 .. N/2 - 1
    nyquist = np.abs(spec[0:1, ...])  # bin -N/2 aliases +N/2
    return np.concatenate([positive, nyquist], axis=0)


def expand_one_sided(mag: np.ndarray, phase: np.ndarray) -> np.ndarray:
    """Rebuild a conjugate-symmetric two-sided spectrogram.

    Args:
        mag: one-sided magnitudes, rows = bins 1..N/2 (Nyquist last), as
            produced by :func:`one_sided_magnitude`.
        phase: matching phases in radians.

    Returns:
        Two-sided DC-centred spectrogram whose ISTFT is real: DC is zero and
        the Nyquist row is forced real.
    """
    rows = mag.shape[0]
    n = rows * 2
    out = np.zeros((n,) + mag.shape[1:], dtype=np.complex128)
    positive = mag[:-1] * np.exp(1j * phase[:-1])
    out[rows + 1 :, ...] = positive
    out[1:rows, ...] = np.conj(positive[::-1, ...])
    out[0, ...] = mag[-1] * np.cos(phase[-1])
    return out


__all__ = [
    "StftConfig",
    "periodic_hann",
    "num_frames",
    "frequency_bins",
    "stft",
    "istft",
    "range_doppler",
    "one_sided_magnitude",
    "expand_one_sided",
]
