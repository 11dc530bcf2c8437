"""Figure rendering: CSV parsing, slope fits, deterministic PNG output."""

import struct

import numpy as np
import pytest

from otsfd_figures.cli import main
from otsfd_figures.csvdata import CSV_HEADER, CsvFormatError, read_series
from otsfd_figures.plots import fit_slope, plot_timing, tail_slope


def write_csv(path, experiment, variant, ns, errors, runtimes=None, scheme="fe"):
    lines = [CSV_HEADER]
    for k, n in enumerate(ns):
        dx = 1.0 / float(n)
        rt = 0.0 if runtimes is None else float(runtimes[k])
        lines.append(
            f"{experiment},{scheme},{variant},{int(n)},{dx!r},{(dx**2/6)!r},"
            f"{float(errors[k])!r},{rt!r}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def quartic_csv(tmp_path, name="conv.csv"):
    ns = np.array([25, 50, 100, 200])
    errors = (1.0 / ns) ** 4
    p = tmp_path / name
    write_csv(p, "diffusion-1d-fe", "ots+nidc", ns, errors)
    return p


def png_size(path):
    data = path.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    w, h = struct.unpack(">II", data[16:24])
    return w, h


def test_read_series_grouping(tmp_path):
    p = quartic_csv(tmp_path)
    series = read_series([p])
    assert len(series) == 1
    s = series[0]
    assert s.experiment == "diffusion-1d-fe" and s.variant == "ots+nidc"
    assert list(s.n) == [25, 50, 100, 200]
    assert s.error_linf[0] == pytest.approx((1 / 25) ** 4, rel=1e-15)


def test_read_series_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("N,error\n10,0.5\n", encoding="utf-8")
    with pytest.raises(CsvFormatError):
        read_series([bad])
    empty = tmp_path / "empty.csv"
    empty.write_text("", encoding="utf-8")
    with pytest.raises(CsvFormatError):
        read_series([empty])
    header_only = tmp_path / "header.csv"
    header_only.write_text(CSV_HEADER + "\n", encoding="utf-8")
    with pytest.raises(CsvFormatError):
        read_series([header_only])
    garbled = tmp_path / "garbled.csv"
    garbled.write_text(CSV_HEADER + "\nexp,fe,v,ten,0.1,0.1,0.1,0.1\n",
                       encoding="utf-8")
    with pytest.raises(CsvFormatError):
        read_series([garbled])


def test_fit_slope_on_synthetic_quartic():
    ns = np.array([25, 50, 100, 200])
    dx = 1.0 / ns
    assert fit_slope(dx, dx**4) == pytest.approx(4.0, abs=0.01)


def test_tail_slope_matches_synthetic_power_law():
    errors = np.array([1e-2, 1e-3, 1e-4, 1e-5])
    runtimes = errors ** -1.5
    assert tail_slope(errors, runtimes) == pytest.approx(-1.5, abs=1e-12)


def test_fit_matches_harness_formula():
    # contract: annotations must agree with harness-fitted orders (<= 0.01)
    harness = pytest.importorskip("otsfd.harness")
    rng = np.random.default_rng(19)
    dx = 0.1 * 0.5 ** np.arange(5)
    errors = 2.0 * dx**3 * np.exp(rng.normal(0, 0.05, 5))
    assert fit_slope(dx, errors) == pytest.approx(
        harness.fit_order(dx, errors), abs=1e-12
    )
    runtimes = np.maximum(1e-6, errors ** -0.8)
    assert tail_slope(errors, runtimes) == pytest.approx(
        harness.tail_slope(errors, runtimes), abs=1e-12
    )


def test_cli_convergence_png_deterministic(tmp_path):
    p = quartic_csv(tmp_path)
    out1 = tmp_path / "fig1.png"
    out2 = tmp_path / "fig2.png"
    assert main(["convergence", str(p), "-o", str(out1)]) == 0
    assert main(["convergence", str(p), "-o", str(out2)]) == 0
    assert png_size(out1) == (1200, 900)
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_timing_plot(tmp_path):
    ns = np.array([50, 100, 200, 400])
    errors = (1.0 / ns) ** 2
    runtimes = 1e-3 * ns**1.5
    p = tmp_path / "timing.csv"
    write_csv(p, "timing-diffusion-1d", "ots+nidc", ns, errors, runtimes)
    out = tmp_path / "timing.png"
    assert main(["timing", str(p), "-o", str(out)]) == 0
    assert png_size(out) == (1200, 900)


def test_single_point_series_renders_without_fit(tmp_path):
    p = tmp_path / "one.csv"
    write_csv(p, "advection-2d", "ots+nidc", [100], [1e-13], [0.5])
    out = tmp_path / "one.png"
    plot_timing(read_series([p]), out)
    assert png_size(out) == (1200, 900)


def test_cli_bad_inputs(tmp_path):
    assert main([]) == 1
    assert main(["convergence", "-o", str(tmp_path / "x.png")]) == 1
    missing = tmp_path / "missing.csv"
    assert main(["convergence", str(missing), "-o", str(tmp_path / "y.png")]) == 1


def test_multi_series_plot(tmp_path):
    ns = np.array([25, 50, 100, 200])
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    write_csv(a, "diffusion-1d-fe", "ots+nidc", ns, (1.0 / ns) ** 4)
    write_csv(b, "diffusion-1d-fe", "ots", ns, (1.0 / ns) ** 2)
    out = tmp_path / "both.png"
    assert main(["convergence", str(a), str(b), "-o", str(out)]) == 0
    series = read_series([a, b])
    assert [s.variant for s in series] == ["ots+nidc", "ots"]
