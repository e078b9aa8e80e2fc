"""WAV file input and output.

Only the two encodings the pipeline needs are supported: 16-bit PCM and
32-bit IEEE float.  Integer samples are normalized by 32768 on load, so a
full-scale positive 16-bit sample maps to 32767/32768.  Multichannel files
are downmixed to mono by averaging.  Anything else in the fmt chunk raises
:class:`UnsupportedFormatError`; structural damage raises
:class:`FormatError`.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import FormatError, ParameterError, UnsupportedFormatError
from .types import AudioSignal

_PCM16 = "pcm16"
_FLOAT32 = "float32"

_FMT_PCM = 1
_FMT_FLOAT = 3


def save_wav(signal: AudioSignal, path: str | Path, encoding: str = _FLOAT32) -> None:
    """Write ``signal`` as a mono WAV file.

    Args:
        signal: audio to write.
        path: destination file path.
        encoding: ``"float32"`` (exact) or ``"pcm16"`` (quantized, values
            clipped to the representable range).
    """
    samples = signal.samples
    rate = int(round(signal.sample_rate))
    if rate <= 0:
        raise ParameterError("sample rate must round to a positive integer for WAV output")

    if encoding == _PCM16:
        fmt_code, bits = _FMT_PCM, 16
        quantized = np.clip(np.round(samples * 32768.0), -32768, 32767)
        payload = quantized.astype("<i2").tobytes()
    elif encoding == _FLOAT32:
        fmt_code, bits = _FMT_FLOAT, 32
        payload = samples.astype("<f4").tobytes()
    else:
        raise ParameterError(f"unknown WAV encoding {encoding!r}")

    block_align = bits // 8
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(payload),
        b"WAVE",
        b"fmt ",
        16,
        fmt_code,
        1,
        rate,
        rate * block_align,
        block_align,
        bits,
        b"data",
        len(payload),
    )
    Path(path).write_bytes(header + payload)


def load_wav(path: str | Path) -> AudioSignal:
    """Read a WAV file into an :class:`AudioSignal`.

    Returns:
        AudioSignal with float64 samples; 16-bit PCM is scaled by 1/32768.

    Raises:
        FormatError: the RIFF structure is damaged or truncated.
        UnsupportedFormatError: valid WAV with an encoding we do not read.
    """
    raw = Path(path).read_bytes()
    if len(raw) < 12 or raw[0:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise FormatError(f"{path}: not a RIFF/WAVE file")

    fmt_fields = None
    data = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos : pos + 4]
        (chunk_size,) = struct.unpack_from("<I", raw, pos + 4)
        body_start = pos + 8
        if body_start + chunk_size > len(raw):
            raise FormatError(f"{path}: chunk {chunk_id!r} extends past end of file")
        body = raw[body_start : body_start + chunk_size]
        if chunk_id == b"fmt ":
            if chunk_size < 16:
                raise FormatError(f"{path}: fmt chunk too short")
            fmt_fields = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            data = body
        # chunks are word-aligned; odd sizes carry a pad byte
        pos = body_start + chunk_size + (chunk_size & 1)

    if fmt_fields is None:
        raise FormatError(f"{path}: missing fmt chunk")
    if data is None:
        raise FormatError(f"{path}: missing data chunk")

    fmt_code, channels, rate, _byte_rate, _block_align, bits = fmt_fields
    if channels < 1:
        raise FormatError(f"{path}: fmt chunk declares zero channels")

    if fmt_code == _FMT_PCM and bits == 16:
        flat = np.frombuffer(data[: len(data) - (len(data) % 2)], dtype="<i2")
        samples = flat.astype(np.float64) / 32768.0
    elif fmt_code == _FMT_FLOAT and bits == 32:
        flat = np.frombuffer(data[: len(data) - (len(data) % 4)], dtype="<f4")
        samples = flat.astype(np.float64)
    else:
        raise UnsupportedFormatError(
            f"{path}: unsupported WAV encoding (format={fmt_code}, bits={bits}); "
            "only 16-bit PCM and 32-bit float are read"
        )

    if channels > 1:
        usable = (samples.size // channels) * channels
        samples = samples[:usable].reshape(-1, channels).mean(axis=1)
    return AudioSignal(samples=samples, sample_rate=float(rate))


__all__ = ["load_wav", "save_wav"]
