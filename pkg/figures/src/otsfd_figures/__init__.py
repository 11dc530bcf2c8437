"""Paper-style figures from harness CSVs: log-log error-vs-N convergence
plots and runtime-vs-error timing plots.

This package talks to the solver toolkit only through its CSV schema; it has
no import-time dependency on it.
"""

from .csvdata import CSV_HEADER, Series, read_series
from .plots import fit_slope, plot_convergence, plot_timing, tail_slope

__all__ = [
    "CSV_HEADER",
    "Series",
    "read_series",
    "fit_slope",
    "tail_slope",
    "plot_convergence",
    "plot_timing",
]

__version__ = "0.1.0"
