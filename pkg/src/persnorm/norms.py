"""L1/L2 persistence norms and the per-dataset norms table."""

from __future__ import annotations

import csv
import enum
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ParseError, PersnormError, PolicyError
from .persistence import PersistenceDiagram, compute_diagram
from .rips import AUTO, DEFAULT_TRIANGLE_BUDGET, MaxScale
from .stats import PointCloud, SummaryStats, summarize

NORMS_HEADER = (
    "dataset", "L01", "L02", "L11", "L12",
    "sd1", "sd2", "rho", "minX1", "maxX1", "minX2", "maxX2", "dist",
)


class EssentialPolicy(str, enum.Enum):
    """How a feature that never dies enters the norms."""

    DROP = "drop"    # left out of both sums
    CLAMP = "clamp"  # death taken as the diagram's max scale

    @classmethod
    def parse(cls, value: "str | EssentialPolicy") -> "EssentialPolicy":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise PolicyError(f"unknown essential policy {value!r}; use drop or clamp") from None


@dataclass(frozen=True)
class PersistenceNorms:
    L01: float
    L02: float
    L11: float
    L12: float
    essential_policy: EssentialPolicy = EssentialPolicy.DROP

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.L01, self.L02, self.L11, self.L12)

    def scaled(self, factor: float) -> "PersistenceNorms":
        return PersistenceNorms(
            self.L01 * factor, self.L02 * factor, self.L11 * factor, self.L12 * factor,
            self.essential_policy,
        )


def _lifetimes(diagram: PersistenceDiagram, dim: int, policy: EssentialPolicy) -> list[float]:
    out = []
    for p in diagram.in_dim(dim):
        if not p.essential:
            out.append(p.death - p.birth)
        elif policy is EssentialPolicy.CLAMP:
            out.append(diagram.max_scale - p.birth)
    return out


def compute_norms(
    diagram: PersistenceDiagram,
    essential_policy: "EssentialPolicy | str" = EssentialPolicy.DROP,
) -> PersistenceNorms:
    policy = EssentialPolicy.parse(essential_policy)
    if policy is EssentialPolicy.CLAMP and (
        diagram.max_scale is None or not math.isfinite(diagram.max_scale)
    ):
        raise PolicyError("clamping essential features needs a finite max_scale")
    values = []
    for dim in (0, 1):
        lt = _lifetimes(diagram, dim, policy)
        values.append(math.fsum(lt))
        values.append(math.sqrt(math.fsum(v * v for v in lt)))
    return PersistenceNorms(*values, essential_policy=policy)


@dataclass(frozen=True)
class NormsConfig:
    essential_policy: EssentialPolicy = EssentialPolicy.DROP
    max_scale: MaxScale = AUTO
    triangle_budget: int = DEFAULT_TRIANGLE_BUDGET
    jobs: int = 1


def cloud_norms(cloud: PointCloud, config: NormsConfig = NormsConfig()) -> PersistenceNorms:
    diagram = compute_diagram(cloud, config.max_scale, config.triangle_budget)
    return compute_norms(diagram, config.essential_policy)


@dataclass(frozen=True)
class DatasetReport:
    """One norms-table row. ``error`` is set (and the rest ``None``) when the dataset failed."""

    label: str
    norms: PersistenceNorms | None
    stats: SummaryStats | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def report_from_diagram(
    cloud: PointCloud,
    diagram: PersistenceDiagram,
    essential_policy: "EssentialPolicy | str" = EssentialPolicy.DROP,
) -> DatasetReport:
    return DatasetReport(cloud.label, compute_norms(diagram, essential_policy), summarize(cloud))


def dataset_report(cloud: PointCloud, config: NormsConfig = NormsConfig()) -> DatasetReport:
    try:
        return DatasetReport(cloud.label, cloud_norms(cloud, config), summarize(cloud))
    except PersnormError as exc:
        return DatasetReport(cloud.label, None, None, f"{type(exc).__name__}: {exc}")


def norms_table(
    clouds: Iterable[PointCloud], config: NormsConfig = NormsConfig()
) -> list[DatasetReport]:
    """Reports in input order; a dataset that fails becomes an error row."""
    clouds = list(clouds)
    if config.jobs > 1 and len(clouds) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            return list(pool.map(dataset_report, clouds, [config] * len(clouds)))
    return [dataset_report(c, config) for c in clouds]


def fmt_float(value: float) -> str:
    """Shortest decimal that round-trips to the same double."""
    return repr(float(value))


def report_row(report: DatasetReport) -> list[str]:
    if not report.ok:
        return [report.label] + ["nan"] * (len(NORMS_HEADER) - 1)
    n, s = report.norms, report.stats
    values = (
        n.L01, n.L02, n.L11, n.L12,
        s.x1.sd, s.x2.sd, s.pearson_r,
        s.x1.min, s.x1.max, s.x2.min, s.x2.max, s.max_pair_dist,
    )
    return [report.label] + [fmt_float(v) for v in values]


def norms_csv(reports: Sequence[DatasetReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(NORMS_HEADER)
    for r in reports:
        w.writerow(report_row(r))
    return buf.getvalue()


def write_norms_csv(reports: Sequence[DatasetReport], path: "str | Path") -> None:
    Path(path).write_text(norms_csv(reports), encoding="utf-8")


def read_norms_csv(path: "str | Path") -> dict[str, dict[str, float]]:
    """Rows keyed by dataset label; every other column parsed as float."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != NORMS_HEADER:
            raise ParseError(f"unexpected norms header {header!r}", line=1, path=str(path))
        out: dict[str, dict[str, float]] = {}
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(NORMS_HEADER):
                raise ParseError(f"expected {len(NORMS_HEADER)} fields", line=lineno, path=str(path))
            try:
                out[row[0]] = {k: float(v) for k, v in zip(NORMS_HEADER[1:], row[1:])}
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno, path=str(path)) from None
    return out
