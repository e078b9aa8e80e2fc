"""Waveform quality metrics: silent-span SNR, LLR, and STOI.

All three follow their published definitions closely enough to preserve the
orderings practitioners expect (identity is perfect, added noise hurts
monotonically); none is calibrated against a third-party implementation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_toeplitz

from .errors import DegenerateInputError, ParameterError
from .resample import resample_array
from .spectral import periodic_hann
from .types import AudioSignal

LLR_LPC_ORDER = 10
LLR_FRAME_SECONDS = 0.025
LLR_MAX = 2.0

_STOI_RATE = 10000.0
_STOI_FRAME = 256
_STOI_HOP = 128
_STOI_FFT = 512
_STOI_NUM_BANDS = 15
_STOI_FIRST_CENTER = 150.0
_STOI_SEGMENT_FRAMES = 30  # 384 ms at the internal rate
_STOI_SILENCE_DB = 40.0


@dataclass(frozen=True)
class EvalReport:
    """Bundle of metric values for one (reference, estimate) pair."""

    snr_db: float | None
    llr: float | None
    stoi: float | None
    llr_frames: tuple[float, ...] = ()
    stoi_segments: tuple[float, ...] = ()

    def to_json(self) -> dict:
        def _clean(v: float | None) -> float | None:
            if v is None:
                return None
            return None if math.isnan(v) else float(v)

        return {
            "schema_version": 1,
            "snr_db": _clean(self.snr_db),
            "llr": _clean(self.llr),
            "stoi": _clean(self.stoi),
            "llr_frames": [float(v) for v in self.llr_frames],
            "stoi_segments": [float(v) for v in self.stoi_segments],
        }


def _as_samples(signal: AudioSignal | np.ndarray) -> np.ndarray:
    if isinstance(signal, AudioSignal):
        return signal.samples
    return np.asarray(signal, dtype=np.float64)


def snr_silent(
    signal: AudioSignal | np.ndarray, silent_spans: list[tuple[int, int]]
) -> float:
    """SNR estimated from known-silent stretches of one waveform.

    Args:
        signal: waveform containing both active and silent stretches.
        silent_spans: disjoint (start, end) sample index pairs that carry
            noise only.  Active power is measured on the complement.

    Returns:
        ``10 * log10(active_power / silent_power)`` in dB; ``inf`` (with a
        warning) when the silent spans are exactly zero.
    """
    x = _as_samples(signal)
    if not silent_spans:
        raise ParameterError("need at least one silent span")
    silent_mask = np.zeros(x.size, dtype=bool)
    for start, end in silent_spans:
        if not 0 <= start < end <= x.size:
            raise ParameterError(f"silent span ({start}, {end}) out of range")
        if silent_mask[start:end].any():
            raise ParameterError("silent spans must be disjoint")
        silent_mask[start:end] = True
    silent_power = float(np.mean(x[silent_mask] ** 2))
    if silent_mask.all():
        # no active region left: active = silent by convention, hence 0 dB
        active_power = silent_power
    else:
        active_power = float(np.mean(x[~silent_mask] ** 2))
    if silent_power == 0.0:
        warnings.warn("silent spans have exactly zero power; SNR is infinite")
        return math.inf
    return 10.0 * math.log10(active_power / silent_power)


def _lpc(frame: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Autocorrelation-method LPC; returns (a, r) with a[0] == 1."""
    r = np.correlate(frame, frame, mode="full")[frame.size - 1 : frame.size + order]
    r = r.copy()
    r[0] *= 1.0 + 1e-9  # diagonal loading keeps the Toeplitz solve stable
    coeffs = solve_toeplitz((r[:-1], r[:-1]), r[1:])
    return np.concatenate([[1.0], -coeffs]), r


def llr(reference: AudioSignal, estimate: AudioSignal) -> tuple[float, tuple[float, ...]]:
    """Log-likelihood ratio of LPC fits, averaged over 25 ms frames.

    Per frame, with a_r/a_e the LPC(10) polynomials of reference and
    estimate and R the reference autocorrelation matrix:

        llr = log( (a_e R a_e') / (a_r R a_r') )

    clamped to [0, 2].  0 means the estimate's spectral envelope matches the
    reference; frames whose reference energy is negligible are skipped.

    Returns:
        (mean llr, per-frame values).
    """
    if reference.sample_rate != estimate.sample_rate:
        raise ParameterError("reference and estimate must share a sample rate")
    x, y = reference.samples, estimate.samples
    frame = int(round(LLR_FRAME_SECONDS * reference.sample_rate))
    hop = frame // 2
    if abs(x.size - y.size) > frame:
        raise ParameterError("reference and estimate lengths differ by over one frame")
    n = min(x.size, y.size)
    x, y = x[:n], y[:n]
    if n < frame:
        raise ParameterError("signals shorter than one LLR frame")
    window = periodic_hann(frame)

    energies = []
    starts = range(0, x.size - frame + 1, hop)
    frames_x = [x[s : s + frame] * window for s in starts]
    frames_y = [y[s : s + frame] * window for s in starts]
    peak = max((float(np.dot(f, f)) for f in frames_x), default=0.0)
    if peak == 0.0:
        raise DegenerateInputError("reference is silent; LLR is undefined")

    values = []
    for fx, fy in zip(frames_x, frames_y):
        # -50 dB gate: keep speech frames, drop gaps where the reference is
        # residual breath noise and the ratio only measures estimate noise
        if float(np.dot(fx, fx)) < peak * 1e-5:
            continue
        a_ref, r = _lpc(fx, LLR_LPC_ORDER)
        a_est, _ = _lpc(fy, LLR_LPC_ORDER)
        # quadratic form a R a' via the autocorrelation sequence
        num = _quadratic_form(a_est, r)
        den = _quadratic_form(a_ref, r)
        if den <= 0 or num <= 0:
            continue
        values.append(min(max(math.log(num / den), 0.0), LLR_MAX))
    if not values:
        raise DegenerateInputError("no frames with usable reference energy")
    per_frame = tuple(values)
    return float(np.mean(per_frame)), per_frame


def _quadratic_form(a: np.ndarray, r: np.ndarray) -> float:
    """a R a' where R is the symmetric Toeplitz matrix of lags r[0..order]."""
    order = a.size - 1
    acf_of_a = np.correlate(a, a, mode="full")[order:]
    return float(a.dot(a) * r[0] + 2.0 * np.dot(acf_of_a[1:], r[1 : order + 1]))


def _third_octave_bands(num_bins: int, rate: float) -> np.ndarray:
    freqs = np.arange(num_bins) * rate / _STOI_FFT
    centers = _STOI_FIRST_CENTER * 2.0 ** (np.arange(_STOI_NUM_BANDS) / 3.0)
    lows = centers * 2.0 ** (-1.0 / 6.0)
    highs = centers * 2.0 ** (1.0 / 6.0)
    bands = np.zeros((_STOI_NUM_BANDS, num_bins), dtype=bool)
    for j in range(_STOI_NUM_BANDS):
        bands[j] = (freqs >= lows[j]) & (freqs < highs[j])
    return bands


def stoi(reference: AudioSignal, estimate: AudioSignal) -> tuple[float, tuple[float, ...]]:
    """Short-time intelligibility score in [0, 1].

    Both signals are resampled to 10 kHz, silent reference frames are
    dropped, and one-third-octave band envelopes are correlated over
    384 ms segments; the score is the mean correlation over all
    segment/band pairs.

    The classic STOI formulation adds a clamp of the normalized estimate
    envelope at +15 dB above the reference before correlating.  That clamp
    makes the estimate inherit the reference's envelope shape wherever the
    estimate rides above it, which floors the score near 0.5 for estimates
    that are pure noise and compresses the useful low end of the scale.  It
    is omitted here: the raw correlations keep identity at 1, stay monotone
    under decreasing additive noise, and send uncorrelated noise toward 0.

    Returns:
        (score, per-segment mean correlations).
    """
    if reference.sample_rate != estimate.sample_rate:
        raise ParameterError("reference and estimate must share a sample rate")
    if reference.samples.size != estimate.samples.size:
        raise ParameterError("reference and estimate must have equal length")
    if reference.duration < 1.0:
        raise ParameterError("STOI needs at least one second of audio")

    x = resample_array(reference.samples, reference.sample_rate, _STOI_RATE)
    y = resample_array(estimate.samples, estimate.sample_rate, _STOI_RATE)
    if not np.any(x):
        # the relative silence gate below keeps everything when all frames
        # are equally silent, so catch the empty reference explicitly
        raise DegenerateInputError("reference is silent; STOI is undefined")

    window = periodic_hann(_STOI_FRAME)
    starts = range(0, x.size - _STOI_FRAME + 1, _STOI_HOP)
    frames_x = np.array([x[s : s + _STOI_FRAME] * window for s in starts])
    frames_y = np.array([y[s : s + _STOI_FRAME] * window for s in starts])
    if frames_x.shape[0] < _STOI_SEGMENT_FRAMES:
        raise ParameterError("too few frames for a STOI segment")

    # energy-based silent frame removal, driven by the reference
    energy_db = 20.0 * np.log10(np.linalg.norm(frames_x, axis=1) + 1e-300)
    keep = energy_db > energy_db.max() - _STOI_SILENCE_DB
    frames_x, frames_y = frames_x[keep], frames_y[keep]
    if frames_x.shape[0] < _STOI_SEGMENT_FRAMES:
        raise DegenerateInputError("too few active frames for STOI")

    spec_x = np.abs(np.fft.rfft(frames_x, n=_STOI_FFT, axis=1)) ** 2
    spec_y = np.abs(np.fft.rfft(frames_y, n=_STOI_FFT, axis=1)) ** 2
    bands = _third_octave_bands(spec_x.shape[1], _STOI_RATE)
    env_x = np.sqrt(spec_x @ bands.T)  # [frame, band]
    env_y = np.sqrt(spec_y @ bands.T)

    seg_scores = []
    for m in range(_STOI_SEGMENT_FRAMES, env_x.shape[0] + 1):
        seg_x = env_x[m - _STOI_SEGMENT_FRAMES : m]
        seg_y = env_y[m - _STOI_SEGMENT_FRAMES : m]
        xc = seg_x - seg_x.mean(axis=0, keepdims=True)
        yc = seg_y - seg_y.mean(axis=0, keepdims=True)
        denom = np.linalg.norm(xc, axis=0) * np.linalg.norm(yc, axis=0)
        corr = np.divide(
            (xc * yc).sum(axis=0), denom, out=np.zeros(xc.shape[1]), where=denom > 0
        )
        seg_scores.append(float(corr.mean()))
    score = float(np.clip(np.mean(seg_scores), 0.0, 1.0))
    return score, tuple(seg_scores)


def evaluate(
    reference: AudioSignal,
    estimate: AudioSignal,
    silent_spans: list[tuple[int, int]] | None = None,
) -> EvalReport:
    """Compute all applicable metrics for one pair."""
    snr = snr_silent(estimate, silent_spans) if silent_spans else None
    llr_mean, llr_frames = llr(reference, estimate)
    stoi_mean: float | None
    try:
        stoi_mean, stoi_segments = stoi(reference, estimate)
    except (ParameterError, DegenerateInputError):
        stoi_mean, stoi_segments = None, ()
    return EvalReport(
        snr_db=snr,
        llr=llr_mean,
        stoi=stoi_mean,
        llr_frames=llr_frames,
        stoi_segments=stoi_segments,
    )


__all__ = [
    "EvalReport",
    "snr_silent",
    "llr",
    "stoi",
    "evaluate",
    "LLR_MAX",
]
