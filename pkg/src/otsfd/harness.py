"""Convergence studies: error measurement, order fitting, timing, CSV output.

A study runs one (scheme, time-step policy, correction) combination over a
dyadic sequence of resolutions, records the final-time max-norm error and
wall-clock runtime per resolution, and fits the convergence order as the
least-squares slope of log(error) against log(dx).
"""

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError

CSV_HEADER = "experiment,scheme,variant,N,dx,dt,error_linf,runtime_seconds"


@dataclass(frozen=True)
class StudyConfig:
    """What to run: experiment name, resolutions, and variant switches.

    dt is always derived from dx by the policy; it is never set directly.
    """

    experiment: str
    ns: tuple
    final_time: Optional[float] = None       # None: experiment default
    policy: str = "ots"                      # "ots", "subopt", or "ratio=<c>:<p>"
    correction: bool = True
    fixture: Optional[str] = None            # None: experiment default
    out_path: Optional[str] = None

    def __post_init__(self):
        if len(self.ns) < 4:
            raise ConfigurationError("order fitting needs at least 4 resolutions")
        if len(set(self.ns)) != len(self.ns):
            raise ConfigurationError("resolution list has duplicates")


@dataclass
class RunRow:
    """One resolution of a study."""

    N: int
    dx: float
    dt: float
    error_linf: float
    runtime_seconds: float


@dataclass
class ConvergenceReport:
    experiment: str
    scheme: str
    variant: str
    rows: list
    fitted_order: float = np.nan
    fit_residual: float = np.nan
    pairwise_orders: list = field(default_factory=list)
    dt_over_dt_opt: Optional[float] = None   # exactly 1.0 for optimal-step runs

    def finalize(self):
        """Fit the order once all rows are in (errors must be finite, > 0)."""
        errs = np.array([r.error_linf for r in self.rows])
        dxs = np.array([r.dx for r in self.rows])
        if not np.all(np.isfinite(errs)) or np.any(errs <= 0.0):
            raise ValueError("order fit requires finite positive errors")
        self.fitted_order, self.fit_residual = fit_order(dxs, errs, residual=True)
        self.pairwise_orders = [
            float(np.log(errs[k] / errs[k + 1]) / np.log(dxs[k] / dxs[k + 1]))
            for k in range(len(errs) - 1)
        ]
        return self


def linf_error(numeric, exact) -> float:
    """Max absolute nodal difference; NaN nodes (outside the domain) ignored."""
    a = np.asarray(numeric, dtype=float)
    b = np.asarray(exact, dtype=float)
    diff = np.abs(a - b)
    mask = np.isfinite(diff)
    if not mask.any():
        raise ValueError("no comparable nodes")
    return float(np.max(diff[mask]))


def fit_order(dxs, errors, residual=False):
    """Least-squares slope of log(error) vs log(dx)."""
    dxs = np.asarray(dxs, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if dxs.size < 3:
        raise ValueError("order fit needs at least 3 points")
    lx, le = np.log(dxs), np.log(errors)
    slope, intercept = np.polyfit(lx, le, 1)
    if not residual:
        return float(slope)
    res = le - (slope * lx + intercept)
    return float(slope), float(np.sqrt(np.mean(res**2)))


def run_rows(single_run, ns, repeats=1):
    """Execute single_run(n) -> (dx, dt, error) per resolution, timing each.

    With repeats > 1 the minimum wall-clock time of the repetitions is kept
    (the error is identical across repeats by determinism).
    """
    rows = []
    for n in ns:
        best = np.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            dx, dt, err = single_run(n)
            best = min(best, time.perf_counter() - t0)
        rows.append(RunRow(N=int(n), dx=dx, dt=dt, error_linf=err,
                           runtime_seconds=best))
    return rows


def run_study(config: StudyConfig) -> ConvergenceReport:
    """Run a registered experiment under a StudyConfig."""
    from . import experiments  # late import: experiments builds on this module

    return experiments.run_experiment(
        config.experiment,
        ns=config.ns,
        final_time=config.final_time,
        policy=config.policy,
        correction=config.correction,
        fixture=config.fixture,
        out_path=config.out_path,
    )


def first_step_probe(ns=(25, 50, 100, 200)):
    """Fitted wave-scheme orders by start-up accuracy: {3: ..., 5: ..., "exact": ...}.

    The corrected optimal-step scheme needs a fifth-order-accurate first level
    to reach its full order; a third-order start costs about one order.
    """
    from . import experiments

    out = {}
    for start in (3, 5, "exact"):
        report = experiments.run_wave_start_study(ns, start)
        out[start] = report.fitted_order
    return out


def timing_study(experiment: str, repeats=3):
    """Runtime-vs-error rows per scheme, with tail slopes of log t vs log e.

    Slopes are fitted over the three largest resolutions only (asymptotic
    tail); coarse rows are dominated by constant overhead.
    """
    from . import experiments

    return experiments.run_timing_experiment(experiment, repeats=repeats)


def tail_slope(errors, runtimes, tail=3):
    """log-log slope of runtime vs error over the `tail` smallest errors."""
    order = np.argsort(errors)[:tail]
    e = np.asarray(errors, dtype=float)[order]
    t = np.asarray(runtimes, dtype=float)[order]
    slope, _ = np.polyfit(np.log(e), np.log(t), 1)
    return float(slope)


def _fmt(v):
    """Shortest round-trip decimal for floats (repr of a Python float)."""
    return repr(float(v))


def write_csv(path, experiment, entries):
    """Write study rows; entries are (scheme, variant, RunRow) triples."""
    lines = [CSV_HEADER]
    for scheme, variant, row in entries:
        lines.append(
            f"{experiment},{scheme},{variant},{row.N},{_fmt(row.dx)},"
            f"{_fmt(row.dt)},{_fmt(row.error_linf)},{_fmt(row.runtime_seconds)}"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def report_entries(report: ConvergenceReport):
    return [(report.scheme, report.variant, row) for row in report.rows]
