"""Report figures. Uses the Agg backend and strips timestamps so PNG bytes are reproducible."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .game import rs_lower_bound_ratio  # noqa: E402

PNG_METADATA = {"Software": None}


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=PNG_METADATA)
    plt.close(fig)
    return path


def plot_ratios(rows: Sequence[dict], path: Path) -> Path:
    """Output size over the optimum, one strip per algorithm."""
    names = sorted({r["algorithm"] for r in rows})
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for i, name in enumerate(names):
        ys = [r["ratio"] for r in rows if r["algorithm"] == name]
        xs = i + np.linspace(-0.15, 0.15, len(ys)) if len(ys) > 1 else [i]
        ax.plot(xs, ys, "o", ms=4, alpha=0.7)
    ax.axhline(0.5, color="0.6", lw=0.8, ls="--")
    ax.set_xticks(range(len(names)), names)
    ax.set_ylabel("output / maximum matching")
    ax.set_ylim(0, 1.05)
    return _save(fig, path)


def plot_claims(rows: Sequence[dict], path: Path) -> Path:
    """Certified matching against its threshold and the hidden-avoiding optimum against its bound."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    xs = range(len(rows))
    ax.plot(xs, [r["certified_matching"] - r["certified_threshold"] for r in rows], "o", ms=4,
            label="certified - threshold")
    ax.plot(xs, [r["avoiding_hidden_max"] - r["avoiding_hidden_bound"] for r in rows], "s", ms=4,
            label="avoiding max - bound")
    ax.axhline(0, color="0.3", lw=0.8)
    ax.set_xlabel("instance (seed listed in report.jsonl)")
    ax.set_ylabel("margin (vertices)")
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, path)


def plot_bias_trend(trend: dict, path: Path) -> Path:
    rows = trend["rows"]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy([r["r_prime"] for r in rows], [max(r["mean_abs_bias"], 1e-18) for r in rows], "o-")
    ax.set_xlabel("r'")
    ax.set_ylabel("mean |bias|")
    ax.set_title(f"{trend['missing']} strings removed, k = {trend['k']}", fontsize=9)
    return _save(fig, path)


def plot_ratio_curve(betas: Sequence[float], path: Path) -> Path:
    alphas = np.linspace(0.01, 1.0, 200)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for beta in betas:
        ax.plot(alphas, [rs_lower_bound_ratio(a, beta) for a in alphas], label=f"beta = {beta:g}")
    ax.set_xlabel("alpha")
    ax.set_ylabel("approximation ratio bound")
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, path)
