"""Figure rendering for the CLI report path (Agg backend, files only)."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_solve_figures(report, prefix):
    """Render objective and feasibility traces as ``<prefix>.*.png``.

    Returns the list of file paths written.
    """
    paths = []

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(range(len(report.objective_trace)), report.objective_trace, marker="o")
    ax.set_xlabel("outer iteration")
    ax.set_ylabel("objective")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = f"{prefix}.objective.png"
    fig.savefig(path)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.semilogy(range(1, len(report.feasibility_trace) + 1), report.feasibility_trace)
    ax.set_xlabel("inner iteration")
    ax.set_ylabel("constraint residual (inf-norm)")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = f"{prefix}.residual.png"
    fig.savefig(path)
    plt.close(fig)
    paths.append(path)

    return paths


def save_error_figure(ref, est, path):
    """Render the slice-averaged absolute error map of est against ref."""
    err = np.mean(np.abs(np.asarray(ref) - np.asarray(est)), axis=2)
    fig, ax = plt.subplots(figsize=(4.6, 4.0))
    im = ax.imshow(err, cmap="magma")
    ax.set_xticks([])
    ax.set_yticks([])
    fig.colorbar(im, ax=ax, fraction=0.046)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
