"""Realization of piecewise-linear log-magnitude channels as FIR filters.

A :class:`~radiosound.types.ChannelResponse` describes a surface/material
frequency response as (frequency, gain dB) breakpoints.  Realizing it draws
one uniform gain perturbation per breakpoint (bounded by ``jitter_db``) and
designs a linear-phase FIR whose centre tap is aligned during application,
so filtering is zero-phase and the output stays sample-aligned with the
input.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import firwin2

from .errors import ParameterError
from .types import ChannelResponse

DEFAULT_TAPS = 257


def realize_fir(
    channel: ChannelResponse,
    sample_rate: float,
    taps: int = DEFAULT_TAPS,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Draw one FIR realization of ``channel`` at ``sample_rate``.

    Args:
        channel: breakpoint description; frequencies must lie within
            [0, sample_rate / 2].
        sample_rate: rate of the signal the filter will be applied to.
        taps: filter length; must be odd so the centre tap is exact.
        rng: source for the per-breakpoint gain jitter.  Omitting it (or a
            channel with ``jitter_db == 0``) yields the nominal response.

    Returns:
        Symmetric FIR kernel of length ``taps``.
    """
    if taps % 2 == 0 or taps < 3:
        raise ParameterError("taps must be odd and >= 3")
    nyquist = sample_rate / 2.0
    freqs = np.asarray(channel.breakpoint_frequencies, dtype=np.float64)
    if freqs[-1] > nyquist:
        raise ParameterError("channel breakpoints extend past Nyquist")

    gains_db = np.asarray(channel.breakpoint_gains_db, dtype=np.float64).copy()
    if rng is not None and channel.jitter_db > 0:
        gains_db += rng.uniform(-channel.jitter_db, channel.jitter_db, size=gains_db.size)

    # extend flat to the axis ends so firwin2 sees the full band
    if freqs[0] > 0:
        freqs = np.concatenate([[0.0], freqs])
        gains_db = np.concatenate([[gains_db[0]], gains_db])
    if freqs[-1] < nyquist:
        freqs = np.concatenate([freqs, [nyquist]])
        gains_db = np.concatenate([gains_db, [gains_db[-1]]])

    gains = 10.0 ** (gains_db / 20.0)
    return firwin2(taps, freqs, gains, fs=sample_rate)


def apply_zero_phase(x: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Filter ``x`` with ``kernel`` centred on each sample (no group delay)."""
    if kernel.ndim != 1 or kernel.size % 2 == 0:
        raise ParameterError("kernel must be 1-D with odd length")
    return np.convolve(x, kernel, mode="same")


__all__ = ["DEFAULT_TAPS", "realize_fir", "apply_zero_phase"]
