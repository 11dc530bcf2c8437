"""Log-log figure rendering with slope annotations.

The slope fits use the same least-squares formulas as the harness (log error
against log dx; runtime tail against the three smallest errors), so the
annotations agree with the harness-reported orders to rounding.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# paper convention: circle / square / diamond / triangle
MARKERS = ("o", "s", "D", "^")
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd",
          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22")

FIG_SIZE = (12.0, 9.0)   # inches; at dpi 100 -> 1200 x 900 px
DPI = 100
_METADATA = {"Software": "otsfd-figures"}   # fixed: no timestamps in output


def fit_slope(dx, error):
    """Least-squares slope of log(error) vs log(dx) (harness formula)."""
    slope, _ = np.polyfit(np.log(np.asarray(dx, float)),
                          np.log(np.asarray(error, float)), 1)
    return float(slope)


def tail_slope(error, runtime, tail=3):
    """log-log slope of runtime vs error over the `tail` smallest errors."""
    order = np.argsort(error)[:tail]
    e = np.asarray(error, float)[order]
    t = np.asarray(runtime, float)[order]
    slope, _ = np.polyfit(np.log(e), np.log(t), 1)
    return float(slope)


def _style(k):
    return {
        "marker": MARKERS[k % len(MARKERS)],
        "color": COLORS[k % len(COLORS)],
        "markersize": 7,
        "linewidth": 1.2,
    }


def _save(fig, out_path):
    fig.savefig(out_path, dpi=DPI, metadata=_METADATA)
    plt.close(fig)


def plot_convergence(series, out_path, title=None):
    """L-infinity error against grid points N, one annotated line per series."""
    if not series:
        raise ValueError("no series to plot")
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    for k, s in enumerate(series):
        label = s.label
        if len(s.n) >= 3:
            slope = fit_slope(s.dx, s.error_linf)
            label += f" (slope {slope:.2f})"
        ax.loglog(s.n, s.error_linf, label=label, **_style(k))
    ax.set_xlabel("number of grid points N")
    ax.set_ylabel(r"$L^\infty$ error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    if title:
        ax.set_title(title)
    _save(fig, out_path)


def plot_timing(series, out_path, title=None):
    """Compute time against achieved error, annotated with the tail slope."""
    if not series:
        raise ValueError("no series to plot")
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    for k, s in enumerate(series):
        label = f"{s.experiment} [{s.scheme}/{s.variant}]"
        if len(s.error_linf) >= 3:
            slope = tail_slope(s.error_linf, s.runtime_seconds)
            label += f" (tail slope {slope:.2f})"
        ax.loglog(s.error_linf, s.runtime_seconds, label=label, **_style(k))
    ax.set_xlabel(r"$L^\infty$ error")
    ax.set_ylabel("compute time (s)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    if title:
        ax.set_title(title)
    _save(fig, out_path)
