"""Matplotlib renderings of harness reports, saved to files.

pyplot is imported lazily so that library users who never plot do not pay
the matplotlib import; headless environments fall back to the Agg backend
automatically.
"""

import math
import os
import tempfile

import numpy as np

from .harness import association_sample
from .seeding import derive_seed

_MEASURE_STYLE = {
    "rdc": dict(color="#d62728", marker="o"),
    "pearson": dict(color="#1f77b4", marker="s"),
    "spearman": dict(color="#2ca02c", marker="^"),
    "kendall": dict(color="#9467bd", marker="v"),
    "dcor": dict(color="#ff7f0e", marker="d"),
}


def _pyplot():
    import matplotlib
    if not os.environ.get("DISPLAY") and not os.environ.get("MPLBACKEND"):
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _style(measure):
    return _MEASURE_STYLE.get(measure, dict(marker="."))


def _atomic_savefig(fig, path):
    directory = os.path.dirname(os.path.abspath(path))
    suffix = os.path.splitext(path)[1] or ".png"
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".rdc-fig-", suffix=suffix)
    os.close(fd)
    try:
        fig.savefig(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_power_figure(report, path):
    """One subplot per pattern: power against noise variance, per measure."""
    plt = _pyplot()
    patterns = report.config.patterns
    ncols = min(4, len(patterns))
    nrows = math.ceil(len(patterns) / ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(3.2 * ncols, 2.6 * nrows),
                             squeeze=False, sharey=True)
    by_mp = {}
    for cell in report.cells:
        by_mp.setdefault((cell.measure, cell.pattern), []).append(cell)
    for i, pattern in enumerate(patterns):
        ax = axes[i // ncols][i % ncols]
        for measure in report.config.measures:
            cells = by_mp.get((measure, pattern), [])
            xs = [c.noise_variance for c in cells]
            ys = [c.power for c in cells]
            ax.plot(xs, ys, label=measure, markersize=3, linewidth=1, **_style(measure))
        ax.set_title(pattern, fontsize=9)
        ax.set_ylim(-0.05, 1.05)
        ax.tick_params(labelsize=7)
    for j in range(len(patterns), nrows * ncols):
        axes[j // ncols][j % ncols].set_axis_off()
    handles, labels = axes[0][0].get_legend_handles_labels()
    fig.legend(handles, labels, loc="lower center", ncol=len(labels), fontsize=8)
    fig.supxlabel("noise variance", fontsize=9)
    fig.supylabel("power", fontsize=9)
    fig.tight_layout(rect=(0, 0.07, 1, 1))
    _atomic_savefig(fig, path)
    plt.close(fig)


def save_bench_figure(report, path):
    """Log-log runtime curves; absent cells are simply not drawn."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.6))
    for measure in report.measures:
        cells = [c for c in report.cells if c.measure == measure and c.seconds is not None]
        if not cells:
            continue
        ax.loglog([c.n for c in cells], [c.seconds for c in cells],
                  label=measure, linewidth=1, markersize=4, **_style(measure))
    ax.set_xlabel("sample size")
    ax.set_ylabel("mean seconds")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    _atomic_savefig(fig, path)
    plt.close(fig)


def save_panel_figure(report, path, points: int = 400):
    """Scatter of each association with the measure values printed above it."""
    plt = _pyplot()
    tags = report.associations
    ncols = min(4, len(tags))
    nrows = math.ceil(len(tags) / ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(2.9 * ncols, 3.0 * nrows),
                             squeeze=False)
    values = {(c.association, c.measure): c.value for c in report.cells}
    for i, tag in enumerate(tags):
        ax = axes[i // ncols][i % ncols]
        x, y = association_sample(tag, min(points, report.n),
                                  derive_seed(report.seed, i, 0))
        ax.scatter(x, y, s=3, alpha=0.5, color="#444444", linewidths=0)
        lines = [f"{m}={values.get((tag, m), math.nan):.2f}"
                 for m in report.measures]
        ax.set_title(tag + "\n" + "  ".join(lines), fontsize=6.5)
        ax.set_xticks([])
        ax.set_yticks([])
    for j in range(len(tags), nrows * ncols):
        axes[j // ncols][j % ncols].set_axis_off()
    fig.tight_layout()
    _atomic_savefig(fig, path)
    plt.close(fig)


def save_selection_figure(trace, path, feature_names=None):
    """Dependence value and held-out NMSE along the greedy path."""
    plt = _pyplot()
    steps = np.arange(1, len(trace.indices) + 1)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
    ax1.plot(steps, trace.values, marker="o", color="#d62728", linewidth=1)
    ax1.set_xlabel("step")
    ax1.set_ylabel(f"{trace.measure} with target")
    ax2.plot(steps, trace.nmse, marker="s", color="#1f77b4", linewidth=1)
    ax2.set_xlabel("step")
    ax2.set_ylabel("held-out NMSE")
    if feature_names:
        labels = [feature_names[i] for i in trace.indices]
    else:
        labels = [str(i) for i in trace.indices]
    for ax in (ax1, ax2):
        ax.set_xticks(steps)
        ax.set_xticklabels(labels, rotation=45, fontsize=7)
    fig.tight_layout()
    _atomic_savefig(fig, path)
    plt.close(fig)
