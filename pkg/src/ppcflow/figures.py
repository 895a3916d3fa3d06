"""Matplotlib figures for sweep tables and signal histograms (files only, Agg backend)."""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .apps.trace import SignalTrace  # noqa: E402
from .report import ReportRow  # noqa: E402

# fixed metadata keeps repeated runs byte-identical
_PNG_META = {"Software": None}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)
    return path


def plot_sweep(rows: list[ReportRow], path, title: str = "") -> Path:
    """PSNR and normalized literal count per configuration, side by side."""
    labels = [r.sparsity_spec for r in rows]
    x = np.arange(len(rows))
    finite = [r.psnr_db for r in rows if not math.isinf(r.psnr_db)]
    cap = (max(finite) + 10) if finite else 60.0
    ps = [cap if math.isinf(r.psnr_db) else r.psnr_db for r in rows]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    bars = ax1.bar(x, ps, color="0.55")
    for b, r in zip(bars, rows):
        if math.isinf(r.psnr_db):
            b.set_hatch("//")
            ax1.annotate("inf", (b.get_x() + b.get_width() / 2, b.get_height()),
                         ha="center", va="bottom", fontsize=8)
    ax1.set_ylabel("PSNR vs precise (dB)")
    ax2.bar(x, [r.normalized_literals for r in rows], color="0.3")
    ax2.axhline(1.0, color="k", lw=0.8, ls="--")
    ax2.set_ylabel("literals / precise")
    for ax in (ax1, ax2):
        ax.set_xticks(x)
        ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_histograms(trace: SignalTrace, path, signals: list[str] | None = None) -> Path:
    """One panel per signal showing its value histogram over the signal's full domain."""
    names = signals or list(trace.hists)
    n = len(names)
    cols = min(3, n) or 1
    nrows = max(1, -(-n // cols))
    fig, axes = plt.subplots(nrows, cols, figsize=(4 * cols, 2.6 * nrows), squeeze=False)
    for ax, name in zip(axes.flat, names):
        h = trace.hists[name]
        ax.bar(np.arange(len(h.counts)), h.counts, width=1.0, color="0.2")
        ax.set_xlim(-0.5, len(h.counts) - 0.5)
        ax.set_title(f"{name} ({h.wl} bits)", fontsize=9)
        ax.tick_params(labelsize=7)
    for ax in list(axes.flat)[n:]:
        ax.axis("off")
    fig.tight_layout()
    return _save(fig, path)
