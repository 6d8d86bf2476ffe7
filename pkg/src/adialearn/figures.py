"""Headless figure rendering for the report outputs.

All functions write PNG files next to the delimited outputs and return
the path.  The Agg backend keeps rendering deterministic and display-free.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evolver import EvolutionTrace
from .tasks import BOUNDARY_RADIUS_CASE2, Dataset

__all__ = ["fig_training", "fig_predictions", "fig_trace"]

_DPI = 120


def fig_training(history, path):
    """Loss per evaluation, log-scaled when the range warrants it."""
    history = np.asarray(history, dtype=np.float64)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(np.arange(1, history.size + 1), history, lw=0.8, color="tab:blue")
    ax.plot(np.arange(1, history.size + 1), np.minimum.accumulate(history),
            lw=1.6, color="tab:red", label="best so far")
    if history.size and history.min() > 0 and history.max() / history.min() > 50:
        ax.set_yscale("log")
    ax.set_xlabel("loss evaluation")
    ax.set_ylabel("sum of squared errors")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def fig_predictions(dataset: Dataset, readouts, assigned, path):
    """Scatter of the test set with decision structure and misses marked."""
    readouts = np.asarray(readouts, dtype=np.float64)
    assigned = np.asarray(assigned, dtype=np.int64)
    wrong = assigned != dataset.labels
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    if dataset.features.shape[1] == 1:
        xs = dataset.features[:, 0]
        ax.axhline(0.0, color="0.6", lw=0.8)
        for b in (-1.0 / 3.0, 1.0 / 3.0):
            ax.axvline(b, color="0.6", lw=0.8, ls="--")
        ax.scatter(xs[~wrong], readouts[~wrong], s=18, c=assigned[~wrong],
                   cmap="coolwarm", vmin=0, vmax=1, label="correct")
        ax.scatter(xs[wrong], readouts[wrong], s=42, marker="x", color="k",
                   label="misclassified")
        ax.set_xlabel("x")
        ax.set_ylabel("readout")
    else:
        xs, ys = dataset.features[:, 0], dataset.features[:, 1]
        phi = np.linspace(0.0, 2.0 * np.pi, 256)
        ax.plot(BOUNDARY_RADIUS_CASE2 * np.cos(phi),
                BOUNDARY_RADIUS_CASE2 * np.sin(phi), color="0.4", lw=1.0)
        ax.scatter(xs[~wrong], ys[~wrong], s=18, c=assigned[~wrong],
                   cmap="coolwarm", vmin=0, vmax=1, label="correct")
        ax.scatter(xs[wrong], ys[wrong], s=42, marker="x", color="k",
                   label="misclassified")
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
        ax.set_aspect("equal")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def fig_trace(trace: EvolutionTrace, path):
    """Instantaneous ground-state fidelity and observable along the run."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.0, 5.0), sharex=True)
    ax1.plot(trace.times, trace.fidelities, lw=1.0, color="tab:blue")
    ax1.set_ylabel("ground-state fidelity")
    ax2.plot(trace.times, trace.expectations, lw=1.0, color="tab:orange")
    ax2.set_ylabel("expectation")
    ax2.set_xlabel("time")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
