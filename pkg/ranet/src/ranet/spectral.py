"""Short-time spectra matching the training-patch conventions.

Analysis uses 256-sample frames, 75% overlap (hop 64), and a periodic
Hann window.  Magnitude patches drop the DC row and keep bins 1..128
with Nyquist last, the same layout as training-pair shards.  Resynthesis
is weighted overlap-add with the analysis window, exact in the interior
because the squared-window sum is constant at this overlap.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError

FRAME_LENGTH = 256
HOP = 64
PATCH_ROWS = FRAME_LENGTH // 2


def _window() -> np.ndarray:
    n = np.arange(FRAME_LENGTH)
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * n / FRAME_LENGTH)


def analyze(samples: np.ndarray) -> np.ndarray:
    """STFT of a 1-D signal as complex rows [FRAME_LENGTH//2 + 1, frames].

    Frames start at multiples of the hop; samples past the last full
    frame are dropped.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1:
        raise ParameterError("expected a one-dimensional signal")
    if x.size < FRAME_LENGTH:
        raise ParameterError(f"need at least {FRAME_LENGTH} samples")
    count = 1 + (x.size - FRAME_LENGTH) // HOP
    idx = HOP * np.arange(count)[:, None] + np.arange(FRAME_LENGTH)[None, :]
    return np.fft.rfft(x[idx] * _window()[None, :], axis=1).T


def log_magnitude(spectrum: np.ndarray) -> np.ndarray:
    """log1p one-sided magnitude patch [PATCH_ROWS, frames], DC dropped."""
    if spectrum.ndim != 2 or spectrum.shape[0] != PATCH_ROWS + 1:
        raise ParameterError(f"expected [{PATCH_ROWS + 1}, frames] spectrum rows")
    return np.log1p(np.abs(spectrum[1:, :])).astype(np.float32)


def resynthesize(spectrum: np.ndarray) -> np.ndarray:
    """Weighted overlap-add inverse of :func:`analyze`."""
    if spectrum.ndim != 2 or spectrum.shape[0] != PATCH_ROWS + 1:
        raise ParameterError(f"expected [{PATCH_ROWS + 1}, frames] spectrum rows")
    count = spectrum.shape[1]
    frames = np.fft.irfft(spectrum.T, n=FRAME_LENGTH, axis=1)
    window = _window()
    out = np.zeros((count - 1) * HOP + FRAME_LENGTH)
    weight = np.zeros_like(out)
    for t in range(count):
        start = t * HOP
        out[start : start + FRAME_LENGTH] += frames[t] * window
        weight[start : start + FRAME_LENGTH] += window**2
    # starved edge samples would otherwise divide by a vanishing weight
    good = weight > 0.1 * weight.max()
    out[good] /= weight[good]
    out[~good] = 0.0
    return out


__all__ = ["FRAME_LENGTH", "HOP", "PATCH_ROWS", "analyze", "log_magnitude", "resynthesize"]
