"""Study bookkeeping: order fits, error norms, CSV round-tripping, and the
rerun determinism of everything except wall-clock columns."""

import numpy as np
import pytest

from otsfd.errors import ConfigurationError
from otsfd.harness import (
    CSV_HEADER,
    ConvergenceReport,
    RunRow,
    StudyConfig,
    fit_order,
    linf_error,
    report_entries,
    run_rows,
    tail_slope,
    write_csv,
)


def test_fit_order_exact_power_law():
    dxs = np.array([0.1, 0.05, 0.025, 0.0125])
    errors = 3.0 * dxs**4
    assert fit_order(dxs, errors) == pytest.approx(4.0, abs=1e-12)
    slope, res = fit_order(dxs, errors, residual=True)
    assert res == pytest.approx(0.0, abs=1e-12)


def test_fit_order_with_noise():
    rng = np.random.default_rng(21)
    dxs = 0.1 * 0.5 ** np.arange(6)
    errors = 2.0 * dxs**2 * np.exp(rng.normal(0.0, 0.01, 6))
    assert fit_order(dxs, errors) == pytest.approx(2.0, abs=0.05)


def test_fit_order_needs_three_points():
    with pytest.raises(ValueError):
        fit_order([0.1, 0.05], [1.0, 0.25])


def test_linf_error_brute_force_oracle():
    rng = np.random.default_rng(30)
    a = rng.standard_normal(50)
    b = rng.standard_normal(50)
    expect = max(abs(x - y) for x, y in zip(a, b))
    assert linf_error(a, b) == pytest.approx(expect, rel=1e-15)


def test_linf_error_ignores_nan_nodes():
    a = np.array([1.0, np.nan, 3.0])
    b = np.array([1.5, 2.0, np.nan])
    assert linf_error(a, b) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        linf_error(np.array([np.nan]), np.array([1.0]))


def test_study_config_validation():
    StudyConfig("diffusion-1d-fe", ns=(25, 50, 100, 200))
    with pytest.raises(ConfigurationError):
        StudyConfig("diffusion-1d-fe", ns=(25, 50, 100))
    with pytest.raises(ConfigurationError):
        StudyConfig("diffusion-1d-fe", ns=(25, 50, 100, 100))


def test_report_finalize_orders():
    rows = [RunRow(N=n, dx=1.0 / n, dt=0.0, error_linf=(1.0 / n) ** 3,
                   runtime_seconds=0.0) for n in (10, 20, 40, 80)]
    rep = ConvergenceReport("x", "s", "v", rows).finalize()
    assert rep.fitted_order == pytest.approx(3.0, abs=1e-12)
    assert rep.pairwise_orders == pytest.approx([3.0, 3.0, 3.0], abs=1e-12)
    bad = ConvergenceReport("x", "s", "v", rows[:1] + [
        RunRow(N=20, dx=0.05, dt=0.0, error_linf=np.nan, runtime_seconds=0.0)
    ])
    with pytest.raises(ValueError):
        bad.finalize()


def test_run_rows_times_and_keeps_min():
    calls = []

    def single_run(n):
        calls.append(n)
        return 1.0 / n, 0.5 / n, 1.0 / n**2

    rows = run_rows(single_run, (10, 20), repeats=3)
    assert [r.N for r in rows] == [10, 20]
    assert calls == [10, 10, 10, 20, 20, 20]
    assert all(r.runtime_seconds >= 0.0 for r in rows)
    assert rows[1].error_linf == pytest.approx(1.0 / 400)


def test_tail_slope_on_synthetic_data():
    # t ~ e^{-3/2} exactly
    errors = np.array([1e-2, 1e-3, 1e-4, 1e-5])
    runtimes = errors ** -1.5
    assert tail_slope(errors, runtimes) == pytest.approx(-1.5, abs=1e-12)


def test_csv_format_and_determinism(tmp_path):
    rows = [
        RunRow(N=50, dx=0.02, dt=0.02**2 / 6.0, error_linf=1.25e-7,
               runtime_seconds=0.031),
        RunRow(N=100, dx=0.01, dt=0.01**2 / 6.0, error_linf=7.5e-9,
               runtime_seconds=0.12),
    ]
    path = tmp_path / "study.csv"
    write_csv(path, "diffusion-1d-fe", [("fe", "ots+nidc", r) for r in rows])
    text = path.read_bytes().decode("utf-8")
    lines = text.split("\n")
    assert lines[0] == CSV_HEADER
    assert lines[0] == "experiment,scheme,variant,N,dx,dt,error_linf,runtime_seconds"
    assert lines[1].startswith("diffusion-1d-fe,fe,ots+nidc,50,0.02,")
    assert text.endswith("\n") and "\r" not in text

    # every float column round-trips exactly through the shortest repr
    cols = lines[1].split(",")
    assert float(cols[4]) == rows[0].dx
    assert float(cols[5]) == rows[0].dt
    assert float(cols[6]) == rows[0].error_linf

    # rewriting the same rows is bitwise identical
    path2 = tmp_path / "study2.csv"
    write_csv(path2, "diffusion-1d-fe", [("fe", "ots+nidc", r) for r in rows])
    assert path.read_bytes() == path2.read_bytes()


def test_small_study_rerun_deterministic(tmp_path):
    # an actual (cheap) experiment run twice: all columns except the runtime
    # must match bitwise
    from otsfd.experiments import run_experiment

    def masked(path):
        out = []
        for line in path.read_text().splitlines():
            parts = line.split(",")
            out.append(",".join(parts[:-1]))
        return out

    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (p1, p2):
        run_experiment("diffusion-1d-fe", ns=(15, 20, 25, 30), out_path=str(p))
    assert masked(p1) == masked(p2)


def test_report_entries_shape():
    rows = [RunRow(N=10, dx=0.1, dt=0.01, error_linf=1e-3, runtime_seconds=0.0)]
    rep = ConvergenceReport("e", "scheme", "variant", rows)
    entries = report_entries(rep)
    assert entries == [("scheme", "variant", rows[0])]
