"""Synthetic benchmark suites and the signal generators behind them.

Everything here is deterministic in (seed, size) so CLI reports and the
acceptance tests agree on what they measured.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import make_rng
from .scene import (
    DEFAULT_CHANNEL,
    MotionInterferer,
    SceneDescription,
    VibrationSource,
)
from .types import AudioSignal, ChannelResponse, RadarParams

THROAT_CHANNEL = ChannelResponse(
    breakpoint_frequencies=np.array([50.0, 300.0, 700.0, 1500.0, 3000.0]),
    breakpoint_gains_db=np.array([0.0, -3.0, -18.0, -40.0, -60.0]),
    jitter_db=0.0,
)


def tone(duration: float, rate: float, freq: float, amplitude: float = 0.7) -> np.ndarray:
    t = np.arange(int(round(duration * rate))) / rate
    return amplitude * np.sin(2.0 * np.pi * freq * t)


def _smooth_noise(rng: np.random.Generator, n: int, rate: float, cutoff_hz: float) -> np.ndarray:
    """Unit-variance Gaussian noise lowpassed by a moving average."""
    width = max(int(rate / cutoff_hz), 1)
    x = rng.standard_normal(n + width)
    x = np.convolve(x, np.ones(width) / width, mode="valid")[:n]
    sd = x.std()
    return x / sd if sd > 0 else x


def pseudo_speech(duration: float, rate: float, seed: int) -> np.ndarray:
    """Speech-like test signal: drifting harmonic stack with syllabic pauses.

    Not speech, but shares the structure the metrics and detectors care
    about: a fundamental wandering around 100-220 Hz, harmonics rolling off
    toward 2.5 kHz, irregular per-harmonic amplitude movement, pauses at
    syllable rate, and a little aspiration noise.  The per-harmonic
    envelopes move independently (as formants do); pauses drop well below
    -40 dB so envelope-correlation metrics treat them as silence.
    Deterministic in (duration, rate, seed).
    """
    rng = make_rng(seed, "pseudo-speech")
    n = int(round(duration * rate))
    t = np.arange(n) / rate

    drift = rng.standard_normal(max(n // 256, 2))
    f0 = 150.0 + 60.0 * np.interp(np.linspace(0, 1, n), np.linspace(0, 1, drift.size), np.tanh(drift))
    phase = 2.0 * np.pi * np.cumsum(f0) / rate

    out = np.zeros(n)
    for h in range(1, 13):
        if h * 220.0 > rate / 2:
            break
        flutter = np.exp(0.35 * _smooth_noise(rng, n, rate, 6.0))
        out += np.exp(-h / 4.0) * flutter * np.sin(h * phase + rng.uniform(0, 2 * np.pi))

    # steep-edged syllable gate: transitions shorter than one analysis frame
    # and floors below -100 dB, so pause frames read as silence, not as a
    # smooth envelope arc for correlation metrics to latch onto
    gate = 0.5 * (1.0 + np.tanh(12.0 * np.sin(2.0 * np.pi * 3.5 * t + rng.uniform(0, 2 * np.pi)) + 6.0))
    breath = rng.standard_normal(n)
    breath = np.convolve(breath, np.ones(8) / 8.0, mode="same")
    out = gate * (out + 0.05 * breath)
    peak = np.max(np.abs(out))
    return 0.7 * out / peak if peak > 0 else out


def gated(samples: np.ndarray, rate: float, lead: float, tail: float) -> np.ndarray:
    """Surround a waveform with silence so pipelines see quiet moments."""
    return np.concatenate(
        [np.zeros(int(round(lead * rate))), samples, np.zeros(int(round(tail * rate)))]
    )


@dataclass(frozen=True)
class LabelledScene:
    scene: SceneDescription
    source_bins: tuple[int, ...]
    active_span: tuple[float, float]  # seconds of audio activity


def source_activity(
    labelled: LabelledScene,
    num_frames: int,
    frame_length: int = 256,
    hop: int = 64,
) -> np.ndarray:
    """Per-frame vibration activity of the scene's sources, in [0, 1].

    For each source the displacement RMS over every frame window is computed
    and normalized by that source's peak frame RMS; the maximum across
    sources is returned.  Ground truth for detection scoring derives from
    this curve: solidly voiced frames are positives, syllable gaps are
    negatives, and the attack/decay slivers in between are best excluded
    rather than charged to either side.
    """
    from .simulate import synthesize_displacement

    activity = np.zeros(num_frames)
    for si, src in enumerate(labelled.scene.sources):
        disp = synthesize_displacement(
            src.audio,
            src.channel,
            src.peak_displacement,
            rng=make_rng(labelled.scene.seed, "channel", si),
        ).samples
        rms = np.empty(num_frames)
        for k in range(num_frames):
            seg = disp[k * hop : k * hop + frame_length]
            rms[k] = np.sqrt(np.mean(seg * seg)) if seg.size else 0.0
        peak = rms.max()
        if peak > 0:
            np.maximum(activity, rms / peak, out=activity)
    return activity


def source_active_frames(
    labelled: LabelledScene,
    num_frames: int,
    frame_length: int = 256,
    hop: int = 64,
    rms_fraction: float = 0.3,
) -> np.ndarray:
    """Frames where some source vibrates at ``rms_fraction`` of its peak RMS."""
    return source_activity(labelled, num_frames, frame_length, hop) >= rms_fraction


def _suite_radar(num_range_bins: int = 64, num_receivers: int = 1) -> RadarParams:
    return RadarParams(num_range_bins=num_range_bins, num_receivers=num_receivers)


def build_detection_scene(seed: int, duration: float = 2.0) -> LabelledScene:
    """One detection benchmark scene: a vibrating source among walkers.

    The source holds a fixed bin for the whole scene; one or two interferers
    walk through nearby bins at pedestrian speeds with reflectivity well
    above the source's Doppler sidebands, which is exactly the regime where
    energy detectors false-alarm.
    """
    rng = make_rng(seed, "detection-scene")
    radar = _suite_radar(num_receivers=4)
    spacing = radar.range_bin_spacing
    source_bin = int(rng.integers(8, radar.num_range_bins - 8))

    audio = pseudo_speech(duration, radar.slow_time_rate, seed * 7 + 1)
    source = VibrationSource(
        audio=AudioSignal(samples=audio, sample_rate=radar.slow_time_rate),
        range_m=source_bin * spacing,
        peak_displacement=float(rng.uniform(5e-6, 1e-5)),
        channel=DEFAULT_CHANNEL,
        reflectivity=complex(rng.uniform(0.7, 1.3)),
    )

    interferers = []
    for _ in range(int(rng.integers(1, 3))):
        speed = float(rng.uniform(0.3, 1.2)) * (1 if rng.random() < 0.5 else -1)
        start = float(rng.uniform(0.15, 0.85)) * radar.max_range
        end = np.clip(start + speed * duration, 2 * spacing, radar.max_range - 2 * spacing)
        interferers.append(
            MotionInterferer(
                trajectory_times=np.array([0.0, duration]),
                trajectory_ranges=np.array([start, float(end)]),
                reflectivity=complex(rng.uniform(2.0, 5.0)),
            )
        )

    scene = SceneDescription(
        radar=radar,
        duration=duration,
        seed=seed,
        sources=(source,),
        interferers=tuple(interferers),
        noise_power_per_receiver=(float(10.0 ** rng.uniform(-5.5, -4.8)),),
    )
    return LabelledScene(scene=scene, source_bins=(source_bin,), active_span=(0.0, duration))


def build_detection_suite(num_scenes: int, seed: int, duration: float = 2.0) -> list[LabelledScene]:
    return [build_detection_scene(seed + i, duration) for i in range(num_scenes)]


def build_projection_scene(seed: int) -> tuple[SceneDescription, int, list[tuple[int, int]]]:
    """Scene with leading/trailing silence for projection-angle SNR sweeps.

    Returns:
        (scene, source bin, silent sample spans).
    """
    rng = make_rng(seed, "projection-scene")
    radar = _suite_radar(num_range_bins=32)
    spacing = radar.range_bin_spacing
    rate = radar.slow_time_rate
    lead = tail = 0.3
    body = 1.0
    audio = gated(pseudo_speech(body, rate, seed * 13 + 5), rate, lead, tail)
    source_bin = int(rng.integers(6, radar.num_range_bins - 6))
    scene = SceneDescription(
        radar=radar,
        duration=lead + body + tail,
        seed=seed,
        sources=(
            VibrationSource(
                audio=AudioSignal(samples=audio, sample_rate=rate),
                range_m=source_bin * spacing,
                peak_displacement=5e-6,
            ),
        ),
        noise_power_per_receiver=(1e-6,),
    )
    # margins keep filter edge transients out of the silent estimate
    margin = int(0.08 * rate)
    silent = [
        (margin, int(lead * rate) - margin),
        (int((lead + body) * rate) + margin, int((lead + body + tail) * rate) - margin),
    ]
    return scene, source_bin, silent


def build_two_source_scene(
    seed: int, ranges_m: tuple[float, float] = (0.75, 1.25)
) -> tuple[SceneDescription, tuple[np.ndarray, np.ndarray], tuple[int, int]]:
    """Two talkers at distinct ranges, silence-gated for SNR estimation.

    Returns:
        (scene, the two displacement-driving waveforms, their bins).
    """
    radar = RadarParams(num_range_bins=48, num_receivers=2)
    rate = radar.slow_time_rate
    spacing = radar.range_bin_spacing
    lead, body, tail = 0.3, 1.2, 0.2
    waves = tuple(
        gated(pseudo_speech(body, rate, seed * 31 + k), rate, lead, tail) for k in (0, 1)
    )
    bins = tuple(int(round(r / spacing)) for r in ranges_m)
    sources = tuple(
        VibrationSource(
            audio=AudioSignal(samples=w, sample_rate=rate),
            range_m=b * spacing,
            peak_displacement=8e-6,
        )
        for w, b in zip(waves, bins)
    )
    scene = SceneDescription(
        radar=radar,
        duration=lead + body + tail,
        seed=seed,
        sources=sources,
        noise_power_per_receiver=(1e-6, 1e-6),
    )
    return scene, waves, bins  # type: ignore[return-value]


def tremor(duration: float, rate: float, seed: int) -> np.ndarray:
    """Involuntary low-frequency body motion: tones spread over 35-60 Hz.

    One component dominates so the summed envelope never nulls out; beat
    cancellation would otherwise silence the band for tens of milliseconds.
    """
    rng = make_rng(seed, "tremor")
    t = np.arange(int(round(duration * rate))) / rate
    out = np.zeros(t.size)
    for f, a in ((38.0, 0.12), (44.0, 1.0), (51.0, 0.14), (57.0, 0.1)):
        am = 1.0 + 0.3 * np.sin(2.0 * np.pi * rng.uniform(0.2, 0.6) * t + rng.uniform(0, 2 * np.pi))
        out += a * am * np.sin(2.0 * np.pi * f * t + rng.uniform(0, 2 * np.pi))
    return out / np.max(np.abs(out))


def build_liveness_scene(seed: int, live: bool, duration: float = 1.6) -> tuple[SceneDescription, int]:
    """A single-source scene for liveness scoring.

    Live sources mix strong 35-60 Hz motion into the displacement and see a
    heavier low-pass channel; loudspeaker sources vibrate with the audio
    alone.
    """
    radar = _suite_radar(num_range_bins=32)
    rate = radar.slow_time_rate
    source_bin = 12
    speech = pseudo_speech(duration, rate, seed * 17 + 3)
    if live:
        audio = speech + 1.6 * tremor(duration, rate, seed)
        channel = THROAT_CHANNEL
    else:
        audio = speech
        channel = DEFAULT_CHANNEL
    scene = SceneDescription(
        radar=radar,
        duration=duration,
        seed=seed,
        sources=(
            VibrationSource(
                audio=AudioSignal(samples=audio, sample_rate=rate),
                range_m=source_bin * radar.range_bin_spacing,
                peak_displacement=5e-6,
                channel=channel,
            ),
        ),
        noise_power_per_receiver=(1e-6,),
    )
    return scene, source_bin


__all__ = [
    "THROAT_CHANNEL",
    "LabelledScene",
    "source_activity",
    "source_active_frames",
    "tone",
    "pseudo_speech",
    "gated",
    "tremor",
    "build_detection_scene",
    "build_detection_suite",
    "build_projection_scene",
    "build_two_source_scene",
    "build_liveness_scene",
]
