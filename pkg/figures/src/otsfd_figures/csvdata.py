"""Reading the harness CSV schema.

One file holds one study: a header line followed by one row per resolution.
Files are grouped into plot series by their (experiment, scheme, variant)
triple; a malformed file raises CsvFormatError.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

CSV_HEADER = "experiment,scheme,variant,N,dx,dt,error_linf,runtime_seconds"


class CsvFormatError(ValueError):
    """The file does not conform to the harness CSV schema."""


@dataclass
class Series:
    """All rows of one (experiment, scheme, variant) combination."""

    experiment: str
    scheme: str
    variant: str
    n: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=int))
    dx: np.ndarray = field(default_factory=lambda: np.empty(0))
    dt: np.ndarray = field(default_factory=lambda: np.empty(0))
    error_linf: np.ndarray = field(default_factory=lambda: np.empty(0))
    runtime_seconds: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def label(self) -> str:
        return f"{self.experiment} [{self.variant}]"


def read_series(paths):
    """Parse CSV files into a list of Series, one per variant, input order."""
    order = []
    collected = {}
    for path in paths:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise CsvFormatError(f"{path}: empty file")
            if ",".join(header) != CSV_HEADER:
                raise CsvFormatError(
                    f"{path}: header {','.join(header)!r} != {CSV_HEADER!r}"
                )
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 8:
                    raise CsvFormatError(f"{path}:{lineno}: expected 8 columns")
                experiment, scheme, variant = row[0], row[1], row[2]
                try:
                    vals = (int(row[3]),) + tuple(float(v) for v in row[4:])
                except ValueError as exc:
                    raise CsvFormatError(f"{path}:{lineno}: {exc}")
                key = (experiment, scheme, variant)
                if key not in collected:
                    collected[key] = []
                    order.append(key)
                collected[key].append(vals)

    series = []
    for key in order:
        rows = np.array(collected[key], dtype=float)
        series.append(Series(
            experiment=key[0],
            scheme=key[1],
            variant=key[2],
            n=rows[:, 0].astype(int),
            dx=rows[:, 1],
            dt=rows[:, 2],
            error_linf=rows[:, 3],
            runtime_seconds=rows[:, 4],
        ))
    if not series:
        raise CsvFormatError("no data rows found")
    return series
