"""Scene descriptions for the CIR simulator, plus their JSON form.

A scene is a static geometry: each vibrating source occupies exactly one
range bin, moving interferers follow piecewise-linear range trajectories
that may sweep across bins, static reflectors contribute constant returns,
and optional multipath entries copy a source's return into a farther bin at
an attenuation.  The JSON schema is documented in docs/schemas.md; audio is
referenced by path relative to the scene file and resampled to the radar
slow-time rate on load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FormatError, ParameterError
from .resample import resample
from .types import AudioSignal, ChannelResponse, RadarParams
from .wavio import load_wav

DEFAULT_CHANNEL = ChannelResponse(
    breakpoint_frequencies=np.array([50.0, 500.0, 2000.0, 3000.0]),
    breakpoint_gains_db=np.array([0.0, -3.0, -12.0, -30.0]),
    jitter_db=0.0,
)


@dataclass(frozen=True)
class VibrationSource:
    """A sound-driven vibrating surface pinned to a single range bin."""

    audio: AudioSignal
    range_m: float
    peak_displacement: float = 5e-6
    channel: ChannelResponse = DEFAULT_CHANNEL
    reflectivity: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if self.range_m < 0:
            raise ParameterError("source range must be non-negative")
        if not 0 < self.peak_displacement < 1e-3:
            raise ParameterError("peak_displacement must lie in (0, 1e-3) metres")


@dataclass(frozen=True)
class MotionInterferer:
    """Bulk motion following a piecewise-linear range trajectory."""

    trajectory_times: np.ndarray
    trajectory_ranges: np.ndarray
    reflectivity: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        times = np.asarray(self.trajectory_times, dtype=np.float64)
        ranges = np.asarray(self.trajectory_ranges, dtype=np.float64)
        if times.ndim != 1 or times.size < 2 or times.size != ranges.size:
            raise ParameterError("trajectory needs >= 2 (time, range) pairs")
        if np.any(np.diff(times) <= 0):
            raise ParameterError("trajectory times must be strictly ascending")
        if np.any(ranges < 0):
            raise ParameterError("trajectory ranges must be non-negative")
        object.__setattr__(self, "trajectory_times", times)
        object.__setattr__(self, "trajectory_ranges", ranges)


@dataclass(frozen=True)
class StaticReflector:
    range_m: float
    reflectivity: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if self.range_m < 0:
            raise ParameterError("reflector range must be non-negative")


@dataclass(frozen=True)
class MultipathSpec:
    """Attenuated copy of a source's return, shifted to a farther bin."""

    source_index: int
    extra_bins: int
    attenuation_db: float

    def __post_init__(self) -> None:
        if self.extra_bins < 1:
            raise ParameterError("multipath extra_bins must be >= 1")
        if self.attenuation_db < 0:
            raise ParameterError("multipath attenuation_db must be >= 0")


@dataclass(frozen=True)
class SceneDescription:
    radar: RadarParams = field(default_factory=RadarParams)
    duration: float = 1.0
    seed: int = 0
    sources: tuple[VibrationSource, ...] = ()
    interferers: tuple[MotionInterferer, ...] = ()
    background: tuple[StaticReflector, ...] = ()
    multipath: tuple[MultipathSpec, ...] = ()
    noise_power_per_receiver: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.duration <= 0:
            raise ParameterError("duration must be positive")
        max_range = self.radar.max_range
        for src in self.sources:
            if src.range_m >= max_range:
                raise ParameterError(f"source range {src.range_m} m is past the range axis")
        for itf in self.interferers:
            if np.any(itf.trajectory_ranges >= max_range):
                raise ParameterError("interferer trajectory leaves the range axis")
        for ref in self.background:
            if ref.range_m >= max_range:
                raise ParameterError(f"reflector range {ref.range_m} m is past the range axis")
        spacing = self.radar.range_bin_spacing
        for mp in self.multipath:
            if not 0 <= mp.source_index < len(self.sources):
                raise ParameterError("multipath source_index out of range")
            src_bin = int(self.sources[mp.source_index].range_m / spacing)
            if src_bin + mp.extra_bins >= self.radar.num_range_bins:
                raise ParameterError("multipath copy falls past the range axis")
        noise = self.noise_power_per_receiver
        if noise == ():
            noise = tuple(0.0 for _ in range(self.radar.num_receivers))
        elif np.isscalar(noise):
            noise = tuple(float(noise) for _ in range(self.radar.num_receivers))
        else:
            noise = tuple(float(p) for p in noise)
            if len(noise) == 1:
                noise = noise * self.radar.num_receivers
        if len(noise) != self.radar.num_receivers:
            raise ParameterError("need one noise power per receiver")
        if any(p < 0 for p in noise):
            raise ParameterError("noise power must be non-negative")
        object.__setattr__(self, "noise_power_per_receiver", noise)


def _channel_from_json(obj: dict) -> ChannelResponse:
    try:
        return ChannelResponse(
            breakpoint_frequencies=np.asarray(obj["breakpoint_frequencies"], dtype=np.float64),
            breakpoint_gains_db=np.asarray(obj["breakpoint_gains_db"], dtype=np.float64),
            jitter_db=float(obj.get("jitter_db", 0.0)),
        )
    except KeyError as exc:
        raise FormatError(f"channel object missing field {exc}") from exc


def _complex_from_json(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise FormatError(f"reflectivity must be a number or [re, im] pair, got {value!r}")


def load_scene(path: str | Path) -> SceneDescription:
    """Parse a scene JSON file, loading and resampling referenced audio.

    Raises:
        ParameterError: a referenced audio file does not exist.
        FormatError: structural problems in the JSON itself.
    """
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: scene file must hold a JSON object")

    radar_obj = obj.get("radar", {})
    radar = RadarParams(
        carrier_frequency=float(radar_obj.get("carrier_frequency", 77.0e9)),
        bandwidth=float(radar_obj.get("bandwidth", 3.52e9)),
        slow_time_rate=float(radar_obj.get("slow_time_rate", 6250.0)),
        num_range_bins=int(radar_obj.get("num_range_bins", 256)),
        num_receivers=int(radar_obj.get("num_receivers", 8)),
    )

    sources = []
    for src_obj in obj.get("sources", []):
        audio_rel = src_obj.get("audio")
        if audio_rel is None:
            raise FormatError(f"{path}: source entry missing 'audio'")
        audio_path = path.parent / audio_rel
        if not audio_path.exists():
            raise ParameterError(f"{path}: audio file not found: {audio_path}")
        audio = load_wav(audio_path)
        if audio.sample_rate != radar.slow_time_rate:
            audio = resample(audio, radar.slow_time_rate)
        channel = (
            _channel_from_json(src_obj["channel"]) if "channel" in src_obj else DEFAULT_CHANNEL
        )
        sources.append(
            VibrationSource(
                audio=audio,
                range_m=float(src_obj["range"]),
                peak_displacement=float(src_obj.get("peak_displacement", 5e-6)),
                channel=channel,
                reflectivity=_complex_from_json(src_obj.get("reflectivity", 1.0)),
            )
        )

    interferers = []
    for itf_obj in obj.get("interferers", []):
        traj = np.asarray(itf_obj["trajectory"], dtype=np.float64)
        if traj.ndim != 2 or traj.shape[1] != 2:
            raise FormatError(f"{path}: interferer trajectory must be [[t, range], ...]")
        interferers.append(
            MotionInterferer(
                trajectory_times=traj[:, 0],
                trajectory_ranges=traj[:, 1],
                reflectivity=_complex_from_json(itf_obj.get("reflectivity", 1.0)),
            )
        )

    background = [
        StaticReflector(
            range_m=float(ref_obj["range"]),
            reflectivity=_complex_from_json(ref_obj.get("reflectivity", 1.0)),
        )
        for ref_obj in obj.get("background", [])
    ]

    multipath = [
        MultipathSpec(
            source_index=int(mp_obj["source_index"]),
            extra_bins=int(mp_obj["extra_bins"]),
            attenuation_db=float(mp_obj["attenuation_db"]),
        )
        for mp_obj in obj.get("multipath", [])
    ]

    noise = obj.get("noise_power_per_receiver", 0.0)
    if np.isscalar(noise):
        noise = tuple(float(noise) for _ in range(radar.num_receivers))
    else:
        noise = tuple(float(p) for p in noise)

    return SceneDescription(
        radar=radar,
        duration=float(obj.get("duration", 1.0)),
        seed=int(obj.get("seed", 0)),
        sources=tuple(sources),
        interferers=tuple(interferers),
        background=tuple(background),
        multipath=tuple(multipath),
        noise_power_per_receiver=noise,
    )


__all__ = [
    "DEFAULT_CHANNEL",
    "VibrationSource",
    "MotionInterferer",
    "StaticReflector",
    "MultipathSpec",
    "SceneDescription",
    "load_scene",
]
