"""CIR stream synthesis from scene descriptions.

Each reflector contributes ``reflectivity * exp(-1j * 2*pi * R(t) / wavelength)``
to its range bin; vibrating sources modulate ``R(t)`` with a channel-filtered,
micrometre-scale displacement of the audio waveform, interferers move through
bins along their trajectories, and static reflectors contribute constant
phasors.  Receivers share the deterministic scene content up to a fixed
per-receiver phase offset and carry independent circular white noise, both
derived from the scene seed, so simulation is reproducible sample-for-sample.
"""

from __future__ import annotations

import numpy as np

from .channel import apply_zero_phase, realize_fir
from .errors import ParameterError
from .rng import make_rng
from .scene import SceneDescription
from .types import AudioSignal, ChannelResponse, CirFrameSeries, DisplacementSignal


def synthesize_displacement(
    audio: AudioSignal,
    channel: ChannelResponse,
    peak_displacement: float,
    rng: np.random.Generator | None = None,
) -> DisplacementSignal:
    """Turn audio into surface displacement through a material channel.

    The audio is filtered by one realization of ``channel`` (zero-phase, so
    displacement stays aligned with the waveform) and scaled so its absolute
    peak equals ``peak_displacement``.  All-zero audio maps to zero
    displacement.
    """
    if audio.samples.size == 0:
        raise ParameterError("audio must be non-empty")
    if not 0 < peak_displacement < 1e-3:
        raise ParameterError("peak_displacement must lie in (0, 1e-3) metres")
    kernel = realize_fir(channel, audio.sample_rate, rng=rng)
    shaped = apply_zero_phase(audio.samples, kernel)
    peak = np.max(np.abs(shaped))
    if peak > 0:
        shaped = shaped * (peak_displacement / peak)
    return DisplacementSignal(samples=shaped, sample_rate=audio.sample_rate)


def _fit_length(x: np.ndarray, n: int) -> np.ndarray:
    if x.size >= n:
        return x[:n]
    return np.concatenate([x, np.zeros(n - x.size)])


PSF_HALF_WIDTH = 2  # bins either side of a scatterer that receive energy


def range_psf(offset: np.ndarray | float) -> np.ndarray | float:
    """Range point-spread weight at ``offset`` bins from a scatterer.

    Bandwidth-limited ranging smears each point target over neighbouring
    bins; a Hann-windowed sinc keeps that smear smooth in time as targets
    migrate, instead of hopping between bins with step edges (which would
    splatter wideband symmetric energy and defeat Doppler analysis).  Unity
    at 0, exactly zero at integer offsets and beyond ``PSF_HALF_WIDTH``.
    """
    offset = np.asarray(offset, dtype=np.float64)
    inside = np.abs(offset) <= PSF_HALF_WIDTH
    taper = np.cos(np.pi * offset / (2.0 * PSF_HALF_WIDTH)) ** 2
    return np.where(inside, np.sinc(offset) * taper, 0.0)


def _deposit(data: np.ndarray, rx_phase: np.ndarray, positions: np.ndarray, sig: np.ndarray) -> None:
    """Add ``sig`` (already reflectivity-scaled) at fractional bin positions.

    ``positions`` may be scalar (static scatterer) or per-sample (moving).
    Energy falling outside the range axis is dropped.
    """
    num_bins = data.shape[1]
    lo = max(0, int(np.floor(positions.min())) - PSF_HALF_WIDTH)
    hi = min(num_bins - 1, int(np.ceil(positions.max())) + PSF_HALF_WIDTH)
    for b in range(lo, hi + 1):
        w = range_psf(b - positions)
        if np.all(w == 0.0):
            continue
        contrib = w * sig
        for r in range(data.shape[0]):
            data[r, b] += rx_phase[r] * contrib


def simulate(scene: SceneDescription) -> CirFrameSeries:
    """Render a scene into a CIR stream.

    Scene content is additive, so with zero noise the output for a union of
    reflectors equals the sum of the individual outputs.  Per-receiver phase
    offsets and per-receiver noise come from independent substreams of the
    scene seed.
    """
    radar = scene.radar
    lam = radar.wavelength
    spacing = radar.range_bin_spacing
    n = int(round(scene.duration * radar.slow_time_rate))
    if n < 1:
        raise ParameterError("scene duration is below one slow-time sample")

    data = np.zeros((radar.num_receivers, radar.num_range_bins, n), dtype=np.complex128)
    rx_phase = np.exp(
        1j * make_rng(scene.seed, "rx-phase").uniform(0.0, 2.0 * np.pi, radar.num_receivers)
    )

    source_signals: list[tuple[float, np.ndarray]] = []
    for si, src in enumerate(scene.sources):
        if src.audio.sample_rate != radar.slow_time_rate:
            raise ParameterError("source audio must be sampled at the radar slow-time rate")
        disp = synthesize_displacement(
            src.audio,
            src.channel,
            src.peak_displacement,
            rng=make_rng(scene.seed, "channel", si),
        )
        x = _fit_length(disp.samples, n)
        sig = src.reflectivity * np.exp(-2j * np.pi * (src.range_m + x) / lam)
        pos = src.range_m / spacing
        source_signals.append((pos, sig))
        _deposit(data, rx_phase, np.asarray(pos), sig)

    for mp in scene.multipath:
        src_pos, sig = source_signals[mp.source_index]
        amp = 10.0 ** (-mp.attenuation_db / 20.0)
        _deposit(data, rx_phase, np.asarray(src_pos + mp.extra_bins), amp * sig)

    if scene.interferers:
        t = np.arange(n) / radar.slow_time_rate
        for itf in scene.interferers:
            ranges = np.interp(t, itf.trajectory_times, itf.trajectory_ranges)
            sig = itf.reflectivity * np.exp(-2j * np.pi * ranges / lam)
            _deposit(data, rx_phase, ranges / spacing, sig)

    for ref in scene.background:
        value = ref.reflectivity * np.exp(-2j * np.pi * ref.range_m / lam)
        _deposit(
            data,
            rx_phase,
            np.asarray(ref.range_m / spacing),
            np.full(n, value, dtype=np.complex128),
        )

    for r, power in enumerate(scene.noise_power_per_receiver):
        if power > 0:
            rng = make_rng(scene.seed, "noise", r)
            scale = np.sqrt(power / 2.0)
            shape = (radar.num_range_bins, n)
            data[r] += scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))

    return CirFrameSeries(data=data, params=radar)


def demodulate_phase(cir: CirFrameSeries, receiver: int, range_bin: int) -> np.ndarray:
    """Unwrapped, mean-removed phase of one bin's slow-time series."""
    series = cir.data[receiver, range_bin]
    if np.all(series == 0):
        raise ParameterError("bin series is identically zero")
    phase = np.unwrap(np.angle(series))
    return phase - phase.mean()


def estimate_displacement(cir: CirFrameSeries, receiver: int, range_bin: int) -> np.ndarray:
    """Displacement estimate (metres, mean-removed) from one bin's phase."""
    phase = demodulate_phase(cir, receiver, range_bin)
    return -phase * cir.params.wavelength / (2.0 * np.pi)


__all__ = [
    "PSF_HALF_WIDTH",
    "range_psf",
    "synthesize_displacement",
    "simulate",
    "demodulate_phase",
    "estimate_displacement",
]
