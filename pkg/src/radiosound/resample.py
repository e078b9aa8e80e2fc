"""Rational-rate resampling with a windowed-sinc polyphase filter.

The anti-alias/anti-image lowpass is a Kaiser(beta=8) windowed sinc sized at
64 taps per polyphase branch at the limiting rate, i.e. the kernel length is
``64 * max(up, down) + 1`` at the internal upsampled rate.  The kernel centre
is group-delay compensated so output sample ``m`` lands on input time
``m * down / up`` exactly.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.signal import upfirdn

from .errors import ParameterError
from .types import AudioSignal

_TAPS_PER_PHASE = 64
_KAISER_BETA = 8.0


def _ratio(rate_in: float, rate_out: float) -> tuple[int, int]:
    if rate_in <= 0 or rate_out <= 0:
        raise ParameterError("sample rates must be positive")
    frac = Fraction(int(round(rate_out * 1000)), int(round(rate_in * 1000)))
    return frac.numerator, frac.denominator


def _design_kernel(up: int, down: int) -> np.ndarray:
    limit = max(up, down)
    half = (_TAPS_PER_PHASE // 2) * limit
    n = np.arange(-half, half + 1, dtype=np.float64)
    # cutoff at the tighter of the two Nyquist edges, in cycles per
    # upsampled-rate sample
    fc = 0.5 / limit
    kernel = 2.0 * fc * np.sinc(2.0 * fc * n) * np.kaiser(2 * half + 1, _KAISER_BETA)
    kernel *= up / kernel.sum()
    return kernel


def resample_array(x: np.ndarray, rate_in: float, rate_out: float) -> np.ndarray:
    """Resample a 1-D float array from ``rate_in`` to ``rate_out``."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ParameterError("resample expects a one-dimensional signal")
    up, down = _ratio(rate_in, rate_out)
    if up == down:
        return x.copy()
    if x.size == 0:
        return x.copy()

    kernel = _design_kernel(up, down)
    center = (kernel.size - 1) // 2
    pad = (-center) % down
    if pad:
        kernel = np.concatenate([np.zeros(pad), kernel])
        center += pad

    n_out = int(np.ceil(x.size * up / down))
    tail = int(np.ceil(kernel.size / up)) + 2
    full = upfirdn(kernel, np.concatenate([x, np.zeros(tail)]), up=up, down=down)
    offset = center // down
    if full.size < offset + n_out:
        full = np.concatenate([full, np.zeros(offset + n_out - full.size)])
    return full[offset : offset + n_out]


def resample(signal: AudioSignal, target_rate: float) -> AudioSignal:
    """Resample an :class:`AudioSignal` to ``target_rate``.

    Same-rate input is returned as a copy without filtering.  Duration is
    preserved to within one output sample period.
    """
    out = resample_array(signal.samples, signal.sample_rate, target_rate)
    return AudioSignal(samples=out, sample_rate=float(target_rate), label=signal.label)


__all__ = ["resample", "resample_array"]
