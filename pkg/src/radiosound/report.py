"""Figure rendering for CLI reports.

Every report-emitting command writes its delimited output (CSV/JSON) and, by
default, a PNG figure next to it.  Rendering is headless and deterministic:
the Agg backend, fixed dpi, and scrubbed PNG metadata keep same-seed runs
byte-identical.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_SAVE_KWARGS = {"dpi": 110, "metadata": {"Software": "radiosound"}}


def save_roc_figure(curves: dict[str, np.ndarray], aucs: dict[str, float], path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    for method, points in curves.items():
        points = np.asarray(points)
        ax.plot(points[:, 0], points[:, 1], label=f"{method} (AUC {aucs[method]:.3f})")
    ax.plot([0, 1], [0, 1], linestyle=":", color="grey", linewidth=0.8)
    ax.set_xlabel("false-alarm rate")
    ax.set_ylabel("detection rate")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1.02)
    ax.legend(loc="lower right", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def save_metric_map_figure(
    values: np.ndarray, labels: np.ndarray | None, path: str | Path
) -> None:
    """Heatmap of a detection score map with flagged cells outlined."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    shown = np.log10(np.asarray(values) + 1e-12)
    im = ax.imshow(shown, aspect="auto", origin="lower", cmap="magma")
    fig.colorbar(im, ax=ax, label="log10 score")
    if labels is not None and labels.any():
        ys, xs = np.nonzero(labels)
        ax.scatter(xs, ys, s=2.0, c="cyan", marker=".", linewidths=0)
    ax.set_xlabel("frame")
    ax.set_ylabel("range bin")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def save_eval_figure(
    ref: np.ndarray, est: np.ndarray, sample_rate: float, path: str | Path
) -> None:
    """Side-by-side log spectrograms of reference and estimate."""
    from .spectral import StftConfig, one_sided_magnitude, stft

    cfg = StftConfig()
    fig, axes = plt.subplots(1, 2, figsize=(8.0, 3.6), sharey=True)
    for ax, sig, title in ((axes[0], ref, "reference"), (axes[1], est, "estimate")):
        mag = one_sided_magnitude(stft(np.asarray(sig), cfg))
        ax.imshow(
            np.log1p(mag),
            aspect="auto",
            origin="lower",
            cmap="viridis",
            extent=(0, sig.size / sample_rate, 0, sample_rate / 2),
        )
        ax.set_title(title, fontsize=9)
        ax.set_xlabel("time [s]")
    axes[0].set_ylabel("frequency [Hz]")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


__all__ = ["save_roc_figure", "save_metric_map_figure", "save_eval_figure"]
