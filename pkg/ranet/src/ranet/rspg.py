"""Minimal reader/writer for RSPG tensor containers.

The network consumes training shards through their published file format
rather than through the producing library, so this module implements the
container independently.  Layout, all little-endian: magic ``RSPG``, u16
version (1), u8 dtype code (0 float32, 1 complex64), u8 ndim, ndim u64
dimension sizes, row-major payload, u32 metadata length, UTF-8 JSON
metadata with sorted keys.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError, ParameterError

MAGIC = b"RSPG"
VERSION = 1
_DTYPES = {0: np.dtype("<f4"), 1: np.dtype("<c8")}
_CODES = {np.dtype(np.float32): 0, np.dtype(np.complex64): 1}


def save_tensor(data: np.ndarray, path: str | Path, metadata: dict | None = None) -> None:
    """Write ``data`` (narrowed to float32/complex64) with JSON metadata."""
    arr = np.asarray(data)
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex64)
    else:
        arr = arr.astype(np.float32)
    code = _CODES[arr.dtype]
    blob = json.dumps(metadata or {}, sort_keys=True, separators=(",", ":")).encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<HBB", VERSION, code, arr.ndim))
        fh.write(struct.pack(f"<{arr.ndim}Q", *arr.shape))
        fh.write(np.ascontiguousarray(arr).tobytes())
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)


def load_tensor(path: str | Path) -> tuple[np.ndarray, dict]:
    """Read one container back as (array, metadata dict)."""
    raw = Path(path).read_bytes()
    if len(raw) < 8 or raw[:4] != MAGIC:
        raise FormatError(f"{path}: not an RSPG container")
    version, code, ndim = struct.unpack_from("<HBB", raw, 4)
    if version != VERSION:
        raise FormatError(f"{path}: unsupported container version {version}")
    if code not in _DTYPES:
        raise FormatError(f"{path}: unknown dtype code {code}")
    offset = 8
    if len(raw) < offset + 8 * ndim:
        raise FormatError(f"{path}: truncated header")
    shape = struct.unpack_from(f"<{ndim}Q", raw, offset)
    offset += 8 * ndim
    dtype = _DTYPES[code]
    count = int(np.prod(shape, dtype=np.int64)) if ndim else 1
    nbytes = count * dtype.itemsize
    if len(raw) < offset + nbytes + 4:
        raise FormatError(f"{path}: truncated payload")
    data = np.frombuffer(raw, dtype=dtype, count=count, offset=offset).reshape(shape)
    offset += nbytes
    (meta_len,) = struct.unpack_from("<I", raw, offset)
    offset += 4
    if len(raw) < offset + meta_len:
        raise FormatError(f"{path}: truncated metadata")
    try:
        metadata = json.loads(raw[offset : offset + meta_len].decode()) if meta_len else {}
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: bad metadata block") from exc
    if not isinstance(metadata, dict):
        raise FormatError(f"{path}: metadata must be a JSON object")
    return data.copy(), metadata


def load_pair_shard(path: str | Path) -> tuple[np.ndarray, np.ndarray, dict]:
    """Read a training shard as (degraded [N, R, F], clean [N, R, F], metadata)."""
    data, meta = load_tensor(path)
    if meta.get("kind") != "training_pairs":
        raise FormatError(f"{path}: metadata kind is not training_pairs")
    if data.ndim != 4 or data.shape[1] != 2:
        raise FormatError(f"{path}: expected a [pairs, 2, rows, frames] payload")
    if data.dtype != np.float32:
        raise FormatError(f"{path}: training shards must be float32")
    return data[:, 0], data[:, 1], meta


def save_pair_shard(
    degraded: np.ndarray, clean: np.ndarray, path: str | Path, metadata: dict | None = None
) -> None:
    """Pack matching degraded/clean patch stacks into one shard file."""
    deg = np.asarray(degraded, dtype=np.float32)
    cln = np.asarray(clean, dtype=np.float32)
    if deg.shape != cln.shape or deg.ndim != 3:
        raise ParameterError("degraded and clean must both be [pairs, rows, frames]")
    meta = {"kind": "training_pairs", "count": int(deg.shape[0])}
    meta.update(metadata or {})
    save_tensor(np.stack([deg, cln], axis=1), path, meta)


__all__ = ["load_tensor", "save_tensor", "load_pair_shard", "save_pair_shard"]
