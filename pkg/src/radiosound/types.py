"""Core domain types.

Arrays stored on these dataclasses are marked read-only so instances can be
shared freely; derived quantities (wavelength, range bin spacing) are
computed from first principles rather than stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .errors import ParameterError


def _frozen(values: np.ndarray) -> np.ndarray:
    out = np.array(values, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class RadarParams:
    """FMCW front-end description.

    ``slow_time_rate`` is the chirp (frame) rate, i.e. the sample rate of the
    per-bin time series the rest of the pipeline treats as audio-bearing.
    """

    carrier_frequency: float = 77.0e9
    bandwidth: float = 3.52e9
    slow_time_rate: float = 6250.0
    num_range_bins: int = 256
    num_receivers: int = 8

    def __post_init__(self) -> None:
        if self.carrier_frequency <= 0 or self.bandwidth <= 0:
            raise ParameterError("carrier_frequency and bandwidth must be positive")
        if self.slow_time_rate <= 0:
            raise ParameterError("slow_time_rate must be positive")
        if self.num_range_bins < 1 or self.num_receivers < 1:
            raise ParameterError("num_range_bins and num_receivers must be >= 1")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def range_bin_spacing(self) -> float:
        # range resolution of a chirp of this bandwidth
        return SPEED_OF_LIGHT / (2.0 * self.bandwidth)

    @property
    def max_range(self) -> float:
        return self.num_range_bins * self.range_bin_spacing


@dataclass(frozen=True)
class AudioSignal:
    """Mono audio samples with an explicit sample rate.

    Samples are finite floats, nominally within [-1, 1]; values outside that
    range are legal in intermediate processing and clipped only on PCM export.
    """

    samples: np.ndarray
    sample_rate: float
    label: str | None = None

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ParameterError("AudioSignal samples must be one-dimensional")
        if samples.size and not np.all(np.isfinite(samples)):
            raise ParameterError("AudioSignal samples must be finite")
        if self.sample_rate <= 0:
            raise ParameterError("sample_rate must be positive")
        object.__setattr__(self, "samples", _frozen(samples))

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass(frozen=True)
class DisplacementSignal:
    """Surface displacement in metres sampled at the radar slow-time rate."""

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ParameterError("DisplacementSignal samples must be one-dimensional")
        if samples.size:
            if not np.all(np.isfinite(samples)):
                raise ParameterError("DisplacementSignal samples must be finite")
            # sound-driven surface motion is micrometre scale; anything close
            # to a range bin is a modelling error, not a signal
            if np.max(np.abs(samples)) >= 1e-3:
                raise ParameterError("displacement must stay below 1e-3 m")
        if self.sample_rate <= 0:
            raise ParameterError("sample_rate must be positive")
        object.__setattr__(self, "samples", _frozen(samples))


@dataclass(frozen=True)
class ChannelResponse:
    """Piecewise-linear log-magnitude response of a surface/material channel.

    Breakpoints hold (frequency Hz, gain dB) pairs; between breakpoints the
    gain in dB is linearly interpolated, and beyond the ends it is held flat.
    ``jitter_db`` bounds the uniform per-realization perturbation applied to
    each breakpoint gain when the channel is drawn with an RNG.
    """

    breakpoint_frequencies: np.ndarray
    breakpoint_gains_db: np.ndarray
    jitter_db: float = 0.0

    def __post_init__(self) -> None:
        freqs = np.asarray(self.breakpoint_frequencies, dtype=np.float64)
        gains = np.asarray(self.breakpoint_gains_db, dtype=np.float64)
        if freqs.ndim != 1 or gains.ndim != 1 or freqs.size != gains.size:
            raise ParameterError("breakpoint arrays must be 1-D and equal length")
        if freqs.size < 2:
            raise ParameterError("channel needs at least two breakpoints")
        if np.any(freqs < 0):
            raise ParameterError("breakpoint frequencies must be non-negative")
        if np.any(np.diff(freqs) <= 0):
            raise ParameterError("breakpoint frequencies must be strictly ascending")
        if not np.all(np.isfinite(gains)):
            raise ParameterError("breakpoint gains must be finite")
        if self.jitter_db < 0:
            raise ParameterError("jitter_db must be non-negative")
        object.__setattr__(self, "breakpoint_frequencies", _frozen(freqs))
        object.__setattr__(self, "breakpoint_gains_db", _frozen(gains))


@dataclass(frozen=True)
class CirFrameSeries:
    """Complex CIR stream, indexed [receiver, range_bin, slow_time]."""

    data: np.ndarray
    params: RadarParams

    def __post_init__(self) -> None:
        data = np.asarray(self.data)
        if not np.iscomplexobj(data):
            data = data.astype(np.complex128)
        if data.ndim != 3:
            raise ParameterError("CIR data must be [receiver, range_bin, slow_time]")
        if data.shape[0] != self.params.num_receivers:
            raise ParameterError("receiver axis does not match params.num_receivers")
        if data.shape[1] != self.params.num_range_bins:
            raise ParameterError("range axis does not match params.num_range_bins")
        if data.size and not np.all(np.isfinite(data)):
            raise ParameterError("CIR data must be finite")
        object.__setattr__(self, "data", _frozen(data))

    @property
    def num_samples(self) -> int:
        return self.data.shape[2]

    @property
    def duration(self) -> float:
        return self.num_samples / self.params.slow_time_rate

    @property
    def range_bin_spacing(self) -> float:
        return self.params.range_bin_spacing


@dataclass(frozen=True)
class RangeDopplerSpectrogram:
    """Per-bin short-time spectra, indexed [receiver, freq_bin, range_bin, frame].

    The frequency axis is two-sided and DC-centred: row ``i`` holds frequency
    bin ``i - frame_length // 2``, so row 0 is the most negative frequency and
    the DC row sits at index ``frame_length // 2``.
    """

    data: np.ndarray
    params: RadarParams
    frame_length: int
    hop: int
    window: str = "periodic_hann"

    def __post_init__(self) -> None:
        data = np.asarray(self.data)
        if data.ndim != 4:
            raise ParameterError("spectrogram data must be [receiver, freq, range_bin, frame]")
        if data.shape[1] != self.frame_length:
            raise ParameterError("frequency axis must have frame_length rows")
        if self.hop < 1 or self.hop > self.frame_length:
            raise ParameterError("hop must lie in [1, frame_length]")
        if self.window != "periodic_hann":
            raise ParameterError("only the periodic_hann window is supported")
        object.__setattr__(self, "data", _frozen(data))

    @property
    def num_frames(self) -> int:
        return self.data.shape[3]

    @property
    def frequencies(self) -> np.ndarray:
        n = self.frame_length
        return (np.arange(n) - n // 2) * (self.params.slow_time_rate / n)

    @property
    def frame_times(self) -> np.ndarray:
        rate = self.params.slow_time_rate
        return (np.arange(self.num_frames) * self.hop + self.frame_length / 2.0) / rate


__all__ = [
    "SPEED_OF_LIGHT",
    "RadarParams",
    "AudioSignal",
    "DisplacementSignal",
    "ChannelResponse",
    "CirFrameSeries",
    "RangeDopplerSpectrogram",
]
