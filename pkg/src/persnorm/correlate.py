"""Cross-dataset correlation tables: Pearson below the diagonal, Spearman above."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DegenerateCloudError, MissingInputError, ParseError
from .norms import NORMS_HEADER, DatasetReport, fmt_float
from .stats import pearson_r

METRICS = ("L01", "L02", "L11", "L12", "MaxDist", "Sk1", "Sk2", "Kt1", "Kt2")
NORM_METRICS = METRICS[:5]
LEGEND = "# lower=pearson upper=spearman"


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values share the mean of the ranks they span."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks[order[k]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    xs, ys = [float(x) for x in xs], [float(y) for y in ys]
    if len(xs) != len(ys):
        raise ValueError("sequences differ in length")
    return pearson_r(average_ranks(xs), average_ranks(ys))


@dataclass(frozen=True)
class MetricsMatrix:
    rows: tuple[str, ...]
    metrics: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if vals.shape != (len(self.rows), len(self.metrics)):
            raise ValueError(f"values shape {vals.shape} does not match {len(self.rows)}x{len(self.metrics)}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("metrics matrix has missing or non-finite cells")
        vals.flags.writeable = False
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        object.__setattr__(self, "values", vals)

    def column(self, metric: str) -> list[float]:
        return self.values[:, self.metrics.index(metric)].tolist()

    def select(self, metrics: Sequence[str]) -> "MetricsMatrix":
        idx = [self.metrics.index(m) for m in metrics]
        return MetricsMatrix(self.rows, tuple(metrics), self.values[:, idx])


@dataclass(frozen=True)
class CorrelationTable:
    metrics: tuple[str, ...]
    values: np.ndarray  # [i, j]: pearson if i > j, spearman if i < j

    def _ij(self, a: str, b: str) -> tuple[int, int]:
        return self.metrics.index(a), self.metrics.index(b)

    def pearson(self, a: str, b: str) -> float:
        i, j = self._ij(a, b)
        return float(self.values[max(i, j), min(i, j)])

    def spearman(self, a: str, b: str) -> float:
        i, j = self._ij(a, b)
        return float(self.values[min(i, j), max(i, j)])


def correlation_table(matrix: MetricsMatrix, metrics: Sequence[str] | None = None) -> CorrelationTable:
    if metrics is not None:
        matrix = matrix.select(metrics)
    if len(matrix.rows) < 3:
        raise DegenerateCloudError("correlation tables need at least three rows")
    cols = [matrix.column(m) for m in matrix.metrics]
    k = len(cols)
    out = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            out[j, i] = pearson_r(cols[i], cols[j])
            out[i, j] = spearman(cols[i], cols[j])
    out.flags.writeable = False
    return CorrelationTable(matrix.metrics, out)


def metrics_from_reports(reports: Sequence[DatasetReport]) -> MetricsMatrix:
    """All nine metrics for the successful rows of a norms table."""
    rows, values = [], []
    for r in reports:
        if not r.ok:
            continue
        n, s = r.norms, r.stats
        rows.append(r.label)
        values.append([
            n.L01, n.L02, n.L11, n.L12, s.max_pair_dist,
            s.x1.skewness, s.x2.skewness, s.x1.kurtosis, s.x2.kurtosis,
        ])
    return MetricsMatrix(tuple(rows), METRICS, np.array(values).reshape(-1, len(METRICS)))


def read_metrics_csv(path: "str | Path") -> MetricsMatrix:
    """Read either a ``dataset,<metric>...`` file or a norms-table CSV.

    For a norms table the ``dist`` column becomes ``MaxDist`` and only the
    five norm metrics are kept.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingInputError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        lines = [(n, row) for n, row in enumerate(csv.reader(fh), start=1)
                 if row and not row[0].startswith("#")]
    if not lines:
        raise ParseError("no header", line=1, path=path)
    _, header = lines[0]
    if tuple(header) == NORMS_HEADER:
        wanted = {"L01": "L01", "L02": "L02", "L11": "L11", "L12": "L12", "MaxDist": "dist"}
    else:
        if header[0] != "dataset" or not set(header[1:]) <= set(METRICS) or len(header) < 2:
            raise ParseError(f"unrecognised metrics header {header!r}", line=lines[0][0], path=path)
        wanted = {m: m for m in METRICS if m in header[1:]}
    pos = {name: header.index(src) for name, src in wanted.items()}
    rows, values = [], []
    for lineno, row in lines[1:]:
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields", line=lineno, path=path)
        try:
            values.append([float(row[pos[m]]) for m in wanted])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, path=path) from None
        rows.append(row[0])
    return MetricsMatrix(tuple(rows), tuple(wanted), np.array(values).reshape(-1, len(wanted)))


def correlation_csv(table: CorrelationTable) -> str:
    buf = io.StringIO()
    buf.write(LEGEND + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["metric", *table.metrics])
    for name, row in zip(table.metrics, table.values.tolist()):
        w.writerow([name] + [fmt_float(v) for v in row])
    return buf.getvalue()


def read_correlation_csv(path: "str | Path") -> CorrelationTable:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    metrics = tuple(rows[0][1:])
    values = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    return CorrelationTable(metrics, values)
