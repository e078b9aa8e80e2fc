"""Checkpoint files: serialized weights plus a spec digest and train log.

The digest pins the architecture the weights were trained for, so a
checkpoint edited or loaded against the wrong shape fails loudly
instead of silently misloading.
"""

from __future__ import annotations

from pathlib import Path

import torch

from .errors import FormatError
from .model import Ranet, RanetSpec

FORMAT = "ranet-checkpoint"
VERSION = 1


def save_checkpoint(path: str | Path, model: Ranet, log: dict | None = None) -> None:
    payload = {
        "format": FORMAT,
        "version": VERSION,
        "spec": {
            "rows": model.spec.rows,
            "frames": model.spec.frames,
            "base_kernels": model.spec.base_kernels,
            "down_blocks": model.spec.down_blocks,
            "residual_blocks": model.spec.residual_blocks,
        },
        "spec_digest": model.spec.digest(),
        "state_dict": model.state_dict(),
        "train_log": log or {},
    }
    torch.save(payload, path)


def load_checkpoint(path: str | Path) -> tuple[Ranet, dict]:
    """Rebuild the model in eval mode; returns (model, train_log)."""
    try:
        payload = torch.load(path, map_location="cpu", weights_only=True)
    except Exception as exc:
        raise FormatError(f"{path}: not a readable checkpoint ({exc})") from exc
    if not isinstance(payload, dict) or payload.get("format") != FORMAT:
        raise FormatError(f"{path}: not a ranet checkpoint")
    if payload.get("version") != VERSION:
        raise FormatError(f"{path}: unsupported checkpoint version")
    try:
        spec = RanetSpec(**payload["spec"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: malformed spec block") from exc
    if spec.digest() != payload.get("spec_digest"):
        raise FormatError(f"{path}: spec digest mismatch")
    model = Ranet(spec)
    try:
        model.load_state_dict(payload["state_dict"])
    except (KeyError, RuntimeError) as exc:
        raise FormatError(f"{path}: weights do not match the declared spec") from exc
    model.eval()
    log = payload.get("train_log", {})
    return model, log if isinstance(log, dict) else {}


__all__ = ["save_checkpoint", "load_checkpoint", "FORMAT", "VERSION"]
