"""Training-set synthesis: degraded/clean log-spectrogram patch pairs.

Each draw picks an audio file, a patch offset, a channel, and a noise level,
then renders the same segment twice: once clean, once through a jittered
channel realization plus white noise at the drawn SNR.  Both versions are
mapped to one-sided log1p magnitude patches (128 frequency rows x 128
frames) on the shared STFT grid, so input and target stay frame- and
bin-aligned by construction.  Pairs are packed into tensor shards of shape
[N, 2, 128, 128] (role 0 = degraded, role 1 = clean).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .channel import apply_zero_phase, realize_fir
from .errors import ParameterError
from .rng import make_rng
from .scene import DEFAULT_CHANNEL
from .spectral import StftConfig, one_sided_magnitude, stft
from .types import AudioSignal, ChannelResponse
from .resample import resample
from .tensorfile import load_tensor, save_tensor
from .wavio import load_wav

PATCH_ROWS = 128
PATCH_FRAMES = 128


@dataclass(frozen=True)
class SynthConfig:
    channels: tuple[ChannelResponse, ...] = (DEFAULT_CHANNEL,)
    noise_db_range: tuple[float, float] = (-5.0, 30.0)
    sample_rate: float = 6250.0
    stft: StftConfig = field(default_factory=StftConfig)
    shard_size: int = 1024

    def __post_init__(self) -> None:
        if not self.channels:
            raise ParameterError("need at least one channel")
        lo, hi = self.noise_db_range
        if lo > hi:
            raise ParameterError("noise_db_range must be (low, high)")
        if self.stft.frame_length // 2 != PATCH_ROWS:
            raise ParameterError("patch rows require frame_length == 256")
        if self.shard_size < 1:
            raise ParameterError("shard_size must be >= 1")

    @property
    def patch_samples(self) -> int:
        return self.stft.frame_length + (PATCH_FRAMES - 1) * self.stft.hop

    def digest(self) -> str:
        desc = {
            "channels": [
                {
                    "f": list(map(float, ch.breakpoint_frequencies)),
                    "g": list(map(float, ch.breakpoint_gains_db)),
                    "jitter_db": ch.jitter_db,
                }
                for ch in self.channels
            ],
            "noise_db_range": list(self.noise_db_range),
            "sample_rate": self.sample_rate,
            "frame_length": self.stft.frame_length,
            "overlap": self.stft.overlap,
        }
        blob = json.dumps(desc, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class TrainingPair:
    degraded: np.ndarray  # [PATCH_ROWS, PATCH_FRAMES] float32, log1p magnitude
    clean: np.ndarray
    info: dict


def degrade(
    audio: AudioSignal,
    channel: ChannelResponse,
    noise_snr_db: float | None,
    rng: np.random.Generator,
) -> AudioSignal:
    """One degraded rendering: jittered channel filter plus noise at an SNR.

    ``noise_snr_db`` is the target ratio of filtered-signal power to noise
    power; ``None`` or ``inf`` adds no noise.  Filtering is zero-phase, so
    the output stays aligned with the input.
    """
    shaped = apply_zero_phase(
        audio.samples, realize_fir(channel, audio.sample_rate, rng=rng)
    )
    if noise_snr_db is not None and math.isfinite(noise_snr_db):
        power = float(np.mean(shaped**2))
        if power > 0:
            sigma = math.sqrt(power / 10.0 ** (noise_snr_db / 10.0))
            shaped = shaped + rng.normal(0.0, sigma, size=shaped.size)
    return AudioSignal(samples=shaped, sample_rate=audio.sample_rate)


def patch_from_samples(samples: np.ndarray, config: SynthConfig) -> np.ndarray:
    """Map one patch-length segment to its log1p one-sided magnitude patch."""
    if samples.size != config.patch_samples:
        raise ParameterError(f"segment must hold {config.patch_samples} samples")
    mag = one_sided_magnitude(stft(samples, config.stft))
    return np.log1p(mag).astype(np.float32)


def patch_to_magnitude(patch: np.ndarray) -> np.ndarray:
    """Invert the log1p mapping back to linear magnitude."""
    return np.expm1(np.asarray(patch, dtype=np.float64))


def _load_audio_dir(audio_dir: Path, rate: float) -> list[np.ndarray]:
    files = sorted(audio_dir.glob("*.wav"))
    if not files:
        raise ParameterError(f"{audio_dir}: no WAV files found")
    clips = []
    for f in files:
        audio = load_wav(f)
        if audio.sample_rate != rate:
            audio = resample(audio, rate)
        if audio.samples.size:
            clips.append(audio.samples)
    if not clips:
        raise ParameterError(f"{audio_dir}: all WAV files are empty")
    return clips


def make_pairs(
    audio_dir: str | Path,
    config: SynthConfig,
    count: int,
    seed: int,
) -> Iterator[TrainingPair]:
    """Yield ``count`` training pairs drawn deterministically from ``seed``."""
    if count < 0:
        raise ParameterError("count must be >= 0")
    if count == 0:
        return
    clips = _load_audio_dir(Path(audio_dir), config.sample_rate)
    rng = make_rng(seed, "pairs")
    need = config.patch_samples
    for i in range(count):
        clip = clips[int(rng.integers(len(clips)))]
        if clip.size < need:
            clip = np.tile(clip, int(np.ceil(need / clip.size)))
        offset = int(rng.integers(0, clip.size - need + 1))
        segment = clip[offset : offset + need]
        channel = config.channels[int(rng.integers(len(config.channels)))]
        snr_db = float(rng.uniform(*config.noise_db_range))
        degraded = degrade(
            AudioSignal(samples=segment, sample_rate=config.sample_rate),
            channel,
            snr_db,
            rng,
        )
        yield TrainingPair(
            degraded=patch_from_samples(degraded.samples, config),
            clean=patch_from_samples(segment, config),
            info={"index": i, "offset": offset, "snr_db": snr_db},
        )


def write_shards(
    pairs: Iterator[TrainingPair],
    out_dir: str | Path,
    config: SynthConfig,
    seed: int,
) -> list[Path]:
    """Pack pairs into RSPG shards of ``config.shard_size``; returns paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: list[Path] = []
    buffer: list[TrainingPair] = []

    def _flush() -> None:
        if not buffer:
            return
        stack = np.stack(
            [np.stack([p.degraded, p.clean], axis=0) for p in buffer], axis=0
        ).astype(np.float32)
        path = out_dir / f"shard_{len(paths):04d}.rspg"
        save_tensor(
            stack,
            path,
            {
                "kind": "training_pairs",
                "layout": "pair,role(degraded|clean),freq,frame",
                "seed": int(seed),
                "config_digest": config.digest(),
                "count": len(buffer),
            },
        )
        paths.append(path)
        buffer.clear()

    for pair in pairs:
        buffer.append(pair)
        if len(buffer) >= config.shard_size:
            _flush()
    _flush()
    return paths


def load_shard(path: str | Path) -> tuple[np.ndarray, np.ndarray, dict]:
    """Read one shard back as (degraded [N, R, F], clean [N, R, F], metadata)."""
    data, meta = load_tensor(path)
    if meta.get("kind") != "training_pairs" or data.ndim != 4 or data.shape[1] != 2:
        raise ParameterError(f"{path}: not a training-pair shard")
    return data[:, 0], data[:, 1], meta


__all__ = [
    "PATCH_ROWS",
    "PATCH_FRAMES",
    "SynthConfig",
    "TrainingPair",
    "degrade",
    "patch_from_samples",
    "patch_to_magnitude",
    "make_pairs",
    "write_shards",
    "load_shard",
]
