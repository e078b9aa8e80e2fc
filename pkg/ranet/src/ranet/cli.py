"""Console entry points: one for training, one for enhancement.

Both emit a single JSON summary on stdout; errors print to stderr and
map to exit code 2 for bad parameters and 3 for malformed files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .audio import load_wav, save_wav
from .checkpoint import save_checkpoint
from .enhance import enhance
from .errors import FormatError, ParameterError, RanetError
from .model import RanetSpec
from .train import TrainConfig, train


def _exit_code(exc: RanetError) -> int:
    if isinstance(exc, ParameterError):
        return 2
    if isinstance(exc, FormatError):
        return 3
    return 1


def train_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ranet-train",
        description="Train the enhancement network on training-pair shards.",
    )
    parser.add_argument("--shards", required=True, help="glob over shard files")
    parser.add_argument("--out", required=True, type=Path, help="checkpoint path")
    parser.add_argument("--epochs", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--learning-rate", type=float, default=1e-3)
    parser.add_argument("--val-fraction", type=float, default=0.1)
    args = parser.parse_args(argv)
    try:
        config = TrainConfig(
            epochs=args.epochs,
            batch_size=args.batch_size,
            learning_rate=args.learning_rate,
            val_fraction=args.val_fraction,
        )
        result = train(args.shards, RanetSpec(), config, args.seed)
        args.out.parent.mkdir(parents=True, exist_ok=True)
        save_checkpoint(args.out, result.model, result.log)
        log_path = args.out.with_name(args.out.name + ".log.json")
        log_path.write_text(json.dumps(result.log, indent=2, sort_keys=True) + "\n")
    except RanetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    print(
        json.dumps(
            {
                "checkpoint": str(args.out),
                "log": str(log_path),
                "epochs": config.epochs,
                "num_pairs": result.log["num_pairs"],
                "baseline_l2": result.log["baseline_l2"],
                "val_l2": result.log["epochs"][-1]["val_l2"],
            },
            sort_keys=True,
        )
    )
    return 0


def enhance_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ranet-enhance",
        description="Run a trained checkpoint over a recovered recording.",
    )
    parser.add_argument("--in", dest="infile", required=True, type=Path, help="input WAV")
    parser.add_argument("--ckpt", required=True, type=Path, help="trained checkpoint")
    parser.add_argument("--out", required=True, type=Path, help="output WAV")
    parser.add_argument("--hop", type=int, default=32, help="window hop in frames")
    args = parser.parse_args(argv)
    try:
        if not args.infile.is_file():
            raise ParameterError(f"{args.infile}: no such file")
        if not args.ckpt.is_file():
            raise ParameterError(f"{args.ckpt}: no such file")
        audio = load_wav(args.infile)
        cleaned = enhance(audio, args.ckpt, overlap_hop=args.hop)
        args.out.parent.mkdir(parents=True, exist_ok=True)
        save_wav(cleaned, args.out)
    except RanetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    print(
        json.dumps(
            {
                "in": str(args.infile),
                "out": str(args.out),
                "samples": int(cleaned.samples.size),
                "sample_rate": cleaned.sample_rate,
            },
            sort_keys=True,
        )
    )
    return 0


__all__ = ["train_main", "enhance_main"]
