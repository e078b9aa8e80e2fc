"""Shard discovery and loading for training runs."""

from __future__ import annotations

import glob
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import FormatError, ParameterError
from .model import RanetSpec
from .rspg import load_pair_shard


def expand_shards(shards: str | Path | Iterable[str | Path]) -> list[Path]:
    """Resolve a glob, a directory, or an explicit list to shard paths."""
    if isinstance(shards, (str, Path)):
        text = str(shards)
        if glob.has_magic(text):
            paths = [Path(p) for p in sorted(glob.glob(text))]
        elif Path(text).is_dir():
            paths = sorted(Path(text).glob("*.rspg"))
        else:
            paths = [Path(text)]
    else:
        paths = [Path(p) for p in shards]
    if not paths:
        raise ParameterError(f"no shards match {shards!r}")
    for p in paths:
        if not p.is_file():
            raise ParameterError(f"{p}: shard file not found")
    return paths


def load_pairs(
    shards: str | Path | Iterable[str | Path], spec: RanetSpec
) -> tuple[np.ndarray, np.ndarray, dict]:
    """Concatenate shards into (degraded [N, R, F], clean [N, R, F], info).

    Every shard must carry training-pair patches of the spec's geometry;
    a mismatch anywhere aborts the load.
    """
    paths = expand_shards(shards)
    degraded, clean, digests = [], [], set()
    for path in paths:
        d, c, meta = load_pair_shard(path)
        if d.shape[1:] != (spec.rows, spec.frames):
            raise FormatError(
                f"{path}: patch shape {d.shape[1:]} does not match "
                f"spec ({spec.rows}, {spec.frames})"
            )
        degraded.append(d)
        clean.append(c)
        if "config_digest" in meta:
            digests.add(str(meta["config_digest"]))
    info = {
        "shards": [p.name for p in paths],
        "config_digests": sorted(digests),
    }
    return np.concatenate(degraded), np.concatenate(clean), info


__all__ = ["expand_shards", "load_pairs"]
