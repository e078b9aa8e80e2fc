"""Binary tensor container used for CIR streams, spectrograms, and shards.

Layout, all little-endian:

    offset 0   magic  0x52 0x53 0x50 0x47 ("RSPG")
    offset 4   u16    version (currently 1)
    offset 6   u8     dtype: 0 = float32, 1 = complex64 (interleaved re/im)
    offset 7   u8     ndim
    offset 8   ndim x u64   dimension sizes
    ...        payload, row-major
    ...        u32    metadata byte length
    ...        metadata, UTF-8 JSON object

Round trips are bit-exact for float32 and complex64 payloads.  Wider inputs
are narrowed on save; this is an interchange format, not working precision.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Any

import numpy as np

from .errors import FormatError, ParameterError
from .types import CirFrameSeries, RadarParams

_MAGIC = b"RSPG"
_VERSION = 1
_DTYPE_CODES = {0: np.dtype("<f4"), 1: np.dtype("<c8")}
_MAX_DIM = 2**32


def save_tensor(data: np.ndarray, path: str | Path, metadata: dict[str, Any] | None = None) -> None:
    """Write ``data`` to ``path``.

    Real input is stored as float32, complex input as complex64.  Metadata
    keys are serialized with sorted keys so identical inputs produce
    byte-identical files.
    """
    arr = np.asarray(data)
    if arr.ndim < 1:
        arr = arr.reshape(1)
    if arr.ndim > 255:
        raise ParameterError("tensor rank exceeds container limit")
    for dim in arr.shape:
        if dim >= _MAX_DIM:
            raise ParameterError(f"dimension {dim} exceeds container limit {_MAX_DIM}")
    if np.iscomplexobj(arr):
        code, arr = 1, np.ascontiguousarray(arr, dtype="<c8")
    else:
        code, arr = 0, np.ascontiguousarray(arr, dtype="<f4")

    meta_bytes = json.dumps(metadata or {}, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<HBB", _VERSION, code, arr.ndim))
        fh.write(struct.pack(f"<{arr.ndim}Q", *arr.shape))
        fh.write(arr.tobytes())
        fh.write(struct.pack("<I", len(meta_bytes)))
        fh.write(meta_bytes)


def load_tensor(path: str | Path) -> tuple[np.ndarray, dict[str, Any]]:
    """Read a tensor container.

    Returns:
        (array, metadata) pair; the array dtype is float32 or complex64.

    Raises:
        FormatError: bad magic, unknown version or dtype code, dimension
            overflow, or truncated payload/metadata.
    """
    raw = Path(path).read_bytes()
    if len(raw) < 8:
        raise FormatError(f"{path}: truncated header")
    if raw[0:4] != _MAGIC:
        raise FormatError(f"{path}: bad magic {raw[0:4]!r}")
    version, code, ndim = struct.unpack_from("<HBB", raw, 4)
    if version != _VERSION:
        raise FormatError(f"{path}: unsupported container version {version}")
    if code not in _DTYPE_CODES:
        raise FormatError(f"{path}: unknown dtype code {code}")

    pos = 8
    if pos + 8 * ndim > len(raw):
        raise FormatError(f"{path}: truncated dimension list")
    dims = struct.unpack_from(f"<{ndim}Q", raw, pos)
    pos += 8 * ndim
    if any(d >= _MAX_DIM for d in dims):
        raise FormatError(f"{path}: dimension overflow")

    dtype = _DTYPE_CODES[code]
    count = 1
    for d in dims:
        count *= d
    nbytes = count * dtype.itemsize
    if pos + nbytes > len(raw):
        raise FormatError(f"{path}: truncated payload")
    arr = np.frombuffer(raw, dtype=dtype, count=count, offset=pos).reshape(dims)
    pos += nbytes

    if pos + 4 > len(raw):
        raise FormatError(f"{path}: missing metadata length")
    (meta_len,) = struct.unpack_from("<I", raw, pos)
    pos += 4
    if pos + meta_len > len(raw):
        raise FormatError(f"{path}: truncated metadata")
    try:
        metadata = json.loads(raw[pos : pos + meta_len].decode("utf-8")) if meta_len else {}
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: metadata is not valid UTF-8 JSON") from exc
    return arr.copy(), metadata


def save_cir(cir: CirFrameSeries, path: str | Path, extra: dict[str, Any] | None = None) -> None:
    """Write a CIR stream with enough metadata to rebuild its RadarParams."""
    meta: dict[str, Any] = {
        "kind": "cir",
        "carrier_frequency": cir.params.carrier_frequency,
        "bandwidth": cir.params.bandwidth,
        "slow_time_rate": cir.params.slow_time_rate,
        "num_range_bins": cir.params.num_range_bins,
        "num_receivers": cir.params.num_receivers,
    }
    if extra:
        meta.update(extra)
    save_tensor(cir.data, path, meta)


def load_cir(path: str | Path) -> CirFrameSeries:
    """Read a CIR stream written by :func:`save_cir`."""
    data, meta = load_tensor(path)
    if meta.get("kind") != "cir":
        raise FormatError(f"{path}: tensor is not a CIR stream (kind={meta.get('kind')!r})")
    if not np.iscomplexobj(data):
        raise FormatError(f"{path}: CIR payload must be complex")
    try:
        params = RadarParams(
            carrier_frequency=float(meta["carrier_frequency"]),
            bandwidth=float(meta["bandwidth"]),
            slow_time_rate=float(meta["slow_time_rate"]),
            num_range_bins=int(meta["num_range_bins"]),
            num_receivers=int(meta["num_receivers"]),
        )
    except KeyError as exc:
        raise FormatError(f"{path}: CIR metadata missing field {exc}") from exc
    return CirFrameSeries(data=data.astype(np.complex128), params=params)


__all__ = ["save_tensor", "load_tensor", "save_cir", "load_cir"]
