"""Command-line interface.

Subcommands mirror the pipeline stages: ``simulate`` renders scene JSON to a
CIR tensor, ``detect`` flags sound-bearing cells, ``recover`` rebuilds
waveforms, ``synth`` writes training shards, ``evaluate`` scores a
reference/estimate pair, ``roc`` runs the detection benchmark, and
``liveness`` classifies a bin as live or loudspeaker.  Report-style commands
write a PNG figure next to their delimited output unless ``--no-figure``.

Exit codes: 0 success, 2 usage or missing input, 3 malformed file content,
4 numerically degenerate input.  All randomness is seed-driven, so repeated
runs with the same arguments produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import detect as detect_mod
from . import metrics as metrics_mod
from .errors import (
    DegenerateInputError,
    FormatError,
    ParameterError,
    RadioSoundError,
)
from .detect import LIVENESS_THRESHOLD
from .recover import RecoverConfig, separate_sources
from .scene import _channel_from_json, load_scene
from .simulate import simulate
from .spectral import StftConfig, range_doppler
from .suites import build_detection_suite
from .synth import SynthConfig, make_pairs, write_shards
from .tensorfile import load_cir, save_cir
from .wavio import load_wav, save_wav

SCHEMA_VERSION = 1

USAGE_EXIT = 2
FORMAT_EXIT = 3
NUMERIC_EXIT = 4


def _emit(obj: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(obj, sort_keys=True))
        return
    for key, value in sorted(obj.items()):
        if key == "schema_version":
            continue
        print(f"{key}: {value}")


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    p = Path(path)
    if not p.exists():
        raise ParameterError(f"config file not found: {p}")
    try:
        obj = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{p}: not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise FormatError(f"{p}: config must be a JSON object")
    return obj


def _merge_config(defaults: dict, file_cfg: dict, flag_cfg: dict) -> dict:
    """Precedence: flags beat the config file, which beats defaults."""
    merged = dict(defaults)
    for key, value in file_cfg.items():
        if key in merged:
            merged[key] = value
    for key, value in flag_cfg.items():
        if value is not None:
            merged[key] = value
    return merged


def _require_file(path: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise ParameterError(f"input file not found: {p}")
    return p


def cmd_simulate(args: argparse.Namespace) -> int:
    scene = load_scene(_require_file(args.scene))
    if args.seed is not None:
        scene = dataclasses.replace(scene, seed=args.seed)
    cir = simulate(scene)
    save_cir(cir, args.out, extra={"seed": scene.seed})
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "out": str(args.out),
            "receivers": cir.params.num_receivers,
            "range_bins": cir.params.num_range_bins,
            "samples": cir.num_samples,
            "seed": scene.seed,
        },
        args.json,
    )
    return 0


_DETECT_DEFAULTS = {
    "method": "radiomic",
    "dc_guard_hz": 60.0,
    "threshold_scale": detect_mod.DetectionConfig().threshold_scale,
    "history_frames": 250,
    "normalized": False,
    "threshold": None,
    "cfar_guard_cells": 2,
    "cfar_train_cells": 8,
    "cfar_scale": 3.0,
    "hhi_threshold": 0.2,
    "receiver": 0,
}


def cmd_detect(args: argparse.Namespace) -> int:
    cfg = _merge_config(
        _DETECT_DEFAULTS,
        _load_config_file(args.config),
        {
            "method": args.method,
            "threshold_scale": args.threshold_scale,
            "threshold": args.threshold,
            "normalized": args.normalized,
            "receiver": args.receiver,
        },
    )
    if args.print_config:
        print(json.dumps(cfg, sort_keys=True))
        return 0

    cir = load_cir(_require_file(args.cir))
    spec = range_doppler(cir)
    method = cfg["method"]
    dconfig = detect_mod.DetectionConfig(
        dc_guard_hz=float(cfg["dc_guard_hz"]),
        threshold_scale=float(cfg["threshold_scale"]),
        history_frames=int(cfg["history_frames"]),
        normalized=bool(cfg["normalized"]),
    )
    if method == "radiomic":
        threshold = cfg["threshold"]
        result = detect_mod.detect_radiomic(
            spec, dconfig, threshold=None if threshold is None else float(threshold)
        )
        score_map = detect_mod.sound_metric(spec, int(cfg["receiver"]), dconfig).values
    elif method == "cfar":
        result = detect_mod.detect_cfar(
            spec,
            receiver=int(cfg["receiver"]),
            guard_cells=int(cfg["cfar_guard_cells"]),
            train_cells=int(cfg["cfar_train_cells"]),
            scale=float(cfg["cfar_scale"]),
            guard_hz=float(cfg["dc_guard_hz"]),
        )
        score_map = detect_mod.cfar_scores(
            spec,
            int(cfg["receiver"]),
            int(cfg["cfar_guard_cells"]),
            int(cfg["cfar_train_cells"]),
            float(cfg["dc_guard_hz"]),
        )
    elif method == "hhi":
        result = detect_mod.detect_hhi(
            spec,
            receiver=int(cfg["receiver"]),
            threshold=float(cfg["hhi_threshold"]),
            guard_hz=float(cfg["dc_guard_hz"]),
        )
        score_map, _ = detect_mod.hhi_scores(spec, int(cfg["receiver"]), float(cfg["dc_guard_hz"]))
    else:
        raise ParameterError(f"unknown detection method {method!r}")

    out = Path(args.out)
    payload = detect_mod.result_to_json(result, spec.num_frames)
    out.write_text(json.dumps(payload, sort_keys=True) + "\n")
    if args.figure:
        from .report import save_metric_map_figure

        save_metric_map_figure(score_map, result.labels, out.with_suffix(".png"))
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "out": str(out),
            "method": result.method,
            "detected_bins": len({b for b, _, _ in result.detected_bins}),
            "detected_cells": int(result.labels.sum()),
        },
        args.json,
    )
    return 0


_RECOVER_DEFAULTS = {
    "highpass_hz": 100.0,
    "highpass_taps": 255,
    "combine": "projected",
    "peak": 0.9,
}


def cmd_recover(args: argparse.Namespace) -> int:
    cfg = _merge_config(
        _RECOVER_DEFAULTS,
        _load_config_file(args.config),
        {"highpass_hz": args.highpass_hz, "combine": args.combine},
    )
    if args.print_config:
        print(json.dumps(cfg, sort_keys=True))
        return 0

    cir = load_cir(_require_file(args.cir))
    detections = detect_mod.load_detection(_require_file(args.detections))
    rconfig = RecoverConfig(
        highpass_hz=float(cfg["highpass_hz"]),
        highpass_taps=int(cfg["highpass_taps"]),
        combine=str(cfg["combine"]),
        peak=float(cfg["peak"]),
    )
    sources = separate_sources(cir, detections, rconfig)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, src in enumerate(sources):
        wav_path = out_dir / f"source_{i:02d}.wav"
        save_wav(src.audio, wav_path)
        sidecar = src.to_json()
        (out_dir / f"source_{i:02d}.json").write_text(
            json.dumps(sidecar, sort_keys=True) + "\n"
        )
        entries.append({"wav": wav_path.name, **sidecar})
    _emit(
        {"schema_version": SCHEMA_VERSION, "out_dir": str(out_dir), "num_sources": len(entries)},
        args.json,
    )
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    file_cfg = _load_config_file(args.config)
    kwargs = {
        "noise_db_range": tuple(file_cfg.get("noise_db_range", (-5.0, 30.0))),
        "shard_size": int(file_cfg.get("shard_size", 1024)),
    }
    if "channels" in file_cfg:
        kwargs["channels"] = tuple(_channel_from_json(ch) for ch in file_cfg["channels"])
    config = SynthConfig(**kwargs)
    if args.print_config:
        print(
            json.dumps(
                {
                    "channels": [
                        {
                            "breakpoint_frequencies": [float(f) for f in ch.breakpoint_frequencies],
                            "breakpoint_gains_db": [float(g) for g in ch.breakpoint_gains_db],
                            "jitter_db": ch.jitter_db,
                        }
                        for ch in config.channels
                    ],
                    "noise_db_range": list(config.noise_db_range),
                    "shard_size": config.shard_size,
                    "config_digest": config.digest(),
                },
                sort_keys=True,
            )
        )
        return 0
    pairs = make_pairs(_require_file(args.audio_dir), config, args.count, args.seed)
    paths = write_shards(pairs, args.out_dir, config, args.seed)
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "out_dir": str(args.out_dir),
            "shards": [p.name for p in paths],
            "count": args.count,
            "seed": args.seed,
        },
        args.json,
    )
    return 0


def _parse_spans(spans: list[str]) -> list[tuple[int, int]]:
    out = []
    for span in spans:
        try:
            start, end = span.split(":")
            out.append((int(start), int(end)))
        except ValueError as exc:
            raise ParameterError(f"bad span {span!r}; expected START:END") from exc
    return out


def cmd_evaluate(args: argparse.Namespace) -> int:
    ref = load_wav(_require_file(args.ref))
    est = load_wav(_require_file(args.est))
    # recovered audio spans whole analysis frames, so it can run a few
    # samples short of the reference; score the overlapping part
    n = min(ref.samples.size, est.samples.size)
    if ref.samples.size != est.samples.size:
        ref = dataclasses.replace(ref, samples=ref.samples[:n])
        est = dataclasses.replace(est, samples=est.samples[:n])
    silent = _parse_spans(args.silent) if args.silent else None
    if silent:
        silent = [(a, min(b, n)) for a, b in silent if a < n]
    report = metrics_mod.evaluate(ref, est, silent)
    payload = report.to_json()
    if args.out:
        prefix = Path(args.out)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        prefix.with_suffix(".json").write_text(json.dumps(payload, sort_keys=True) + "\n")
        if args.figure:
            from .report import save_eval_figure

            save_eval_figure(
                ref.samples, est.samples, ref.sample_rate, prefix.with_suffix(".png")
            )
    _emit(payload, args.json)
    return 0


def cmd_roc(args: argparse.Namespace) -> int:
    suite_cfg = _load_config_file(args.suite)
    num_scenes = int(suite_cfg.get("num_scenes", 50))
    seed = int(suite_cfg.get("seed", 0))
    duration = float(suite_cfg.get("duration", 2.0))
    if args.print_config:
        print(json.dumps({"num_scenes": num_scenes, "seed": seed, "duration": duration}, sort_keys=True))
        return 0

    curves, aucs = run_detection_benchmark(num_scenes, seed, duration, threads=args.threads)
    out = Path(args.out)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "false_alarm_rate", "detection_rate"])
        for method, points in curves.items():
            for fa, dr in points:
                writer.writerow([method, f"{fa:.6f}", f"{dr:.6f}"])
    if args.figure:
        from .report import save_roc_figure

        save_roc_figure(curves, aucs, out.with_suffix(".png"))
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "out": str(out),
            **{f"auc_{m}": round(v, 6) for m, v in aucs.items()},
        },
        args.json,
    )
    return 0


def run_detection_benchmark(
    num_scenes: int, seed: int, duration: float = 2.0, threads: int | None = None
) -> tuple[dict[str, np.ndarray], dict[str, float]]:
    """Score every benchmark scene with all three methods and pool the cells.

    Ground truth per cell: source-bin frames with vibration RMS at >= 30% of
    the source's peak are positives, frames below 5% are negatives, and the
    attack/decay slivers in between are excluded from scoring (charging them
    to either class would measure the truth margin, not the detector).  All
    cells away from source bins are negatives.

    Returns (ROC curves per method, AUC per method).  Scenes are independent,
    so they are scored in a thread pool when ``threads`` allows; results are
    assembled in scene order either way.
    """
    from concurrent.futures import ThreadPoolExecutor

    from .suites import source_activity

    labelled = build_detection_suite(num_scenes, seed, duration)

    def _score(item) -> tuple[np.ndarray, np.ndarray, dict[str, np.ndarray]]:
        spec = range_doppler(simulate(item.scene))
        truth = np.zeros(spec.data.shape[2:], dtype=bool)
        keep = np.ones_like(truth)
        activity = source_activity(item, spec.num_frames)
        for b in item.source_bins:
            truth[b] = activity >= 0.3
            keep[b] = (activity >= 0.3) | (activity <= 0.05)
        receivers = range(spec.data.shape[0])
        # receiver diversity: average each method's score maps over antennas
        return truth, keep, {
            "radiomic": np.mean(
                [detect_mod.outlier_scores(detect_mod.sound_metric(spec, r)) for r in receivers],
                axis=0,
            ),
            "cfar": np.mean([detect_mod.cfar_scores(spec, r) for r in receivers], axis=0),
            "hhi": np.mean([detect_mod.hhi_scores(spec, r)[0] for r in receivers], axis=0),
        }

    workers = threads if threads and threads > 0 else 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            scored = list(pool.map(_score, labelled))
    else:
        scored = [_score(item) for item in labelled]

    truth_all = np.concatenate([t[k] for t, k, _ in scored])
    curves: dict[str, np.ndarray] = {}
    aucs: dict[str, float] = {}
    for method in ("radiomic", "cfar", "hhi"):
        scores_all = np.concatenate([s[method][k] for _, k, s in scored])
        curve = detect_mod.roc_curve(truth_all, scores_all)
        curves[method] = curve
        aucs[method] = detect_mod.auc(curve)
    return curves, aucs


def _span_to_frames(span: str, rate: float, hop: int, frame_length: int, num_frames: int) -> tuple[int, int]:
    try:
        a_ms, b_ms = (float(v) for v in span.split(":"))
    except ValueError as exc:
        raise ParameterError(f"bad span {span!r}, expected START:END in ms") from exc
    if b_ms <= a_ms:
        raise ParameterError("span end must exceed start")
    s0 = a_ms * 1e-3 * rate
    s1 = b_ms * 1e-3 * rate
    k0 = max(0, int(np.floor(s0 / hop)))
    # frames fully inside the span, or the one starting at the span if none fit
    k1 = max(k0 + 1, int(np.floor((s1 - frame_length) / hop)) + 1)
    k0 = min(k0, num_frames - 1)
    k1 = min(k1, num_frames)
    return k0, max(k1, k0 + 1)


def cmd_liveness(args: argparse.Namespace) -> int:
    cir = load_cir(_require_file(args.cir))
    spec = range_doppler(cir)
    scfg = StftConfig()
    if args.span:
        k0, k1 = _span_to_frames(
            args.span, cir.params.slow_time_rate, scfg.hop, scfg.frame_length, spec.num_frames
        )
    else:
        k0, k1 = 0, spec.num_frames
    score = detect_mod.liveness_score(
        spec, args.range_bin, (k0, k1), receiver=args.receiver
    )
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "range_bin": args.range_bin,
            "frames": [k0, k1],
            "score": round(score, 12),
            "threshold": args.threshold,
            "live": bool(score > args.threshold),
        },
        args.json,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radiosound",
        description="Sound sensing pipeline over simulated mmWave CIR streams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="render a scene JSON file to a CIR tensor")
    p.add_argument("scene")
    p.add_argument("out")
    p.add_argument("--seed", type=int, default=None, help="override the scene seed")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("detect", help="flag sound-bearing (bin, frame) cells")
    p.add_argument("cir")
    p.add_argument("--method", choices=["radiomic", "cfar", "hhi"], default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=float, default=None, help="fixed metric threshold")
    p.add_argument("--threshold-scale", type=float, default=None, dest="threshold_scale")
    p.add_argument(
        "--normalized",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="bounded symmetric-fraction metric; pair with a small --threshold-scale",
    )
    p.add_argument("--receiver", type=int, default=None)
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--print-config", action="store_true")
    p.add_argument("--figure", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("recover", help="rebuild waveforms for detected sources")
    p.add_argument("cir")
    p.add_argument("--detections", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--highpass-hz", type=float, default=None, dest="highpass_hz")
    p.add_argument("--combine", choices=["projected", "complex_halves"], default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--print-config", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("synth", help="write degraded/clean training shards")
    p.add_argument("--audio-dir", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--print-config", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("evaluate", help="score an estimate against a reference")
    p.add_argument("--ref", required=True)
    p.add_argument("--est", required=True)
    p.add_argument("--silent", nargs="*", default=None, metavar="START:END")
    p.add_argument("--out", default=None, help="prefix for JSON/PNG report files")
    p.add_argument("--figure", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("roc", help="run the detection benchmark suite")
    p.add_argument("--suite", default=None, help="suite JSON (seed, num_scenes, duration)")
    p.add_argument("--out", required=True, help="CSV of ROC points")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--print-config", action="store_true")
    p.add_argument("--figure", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_roc)

    p = sub.add_parser("liveness", help="score 35-60 Hz motion content of a bin")
    p.add_argument("cir")
    p.add_argument("--range-bin", type=int, required=True, dest="range_bin")
    p.add_argument("--span", default=None, metavar="START:END", help="span in ms")
    p.add_argument("--receiver", type=int, default=0)
    p.add_argument("--threshold", type=float, default=LIVENESS_THRESHOLD)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_liveness)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FORMAT_EXIT
    except (DegenerateInputError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NUMERIC_EXIT
    except RadioSoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
