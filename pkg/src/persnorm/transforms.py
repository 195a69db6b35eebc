"""Scaling, translation and X1-stretch sweeps of the persistence norms."""

from __future__ import annotations

import csv
import enum
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .datasets import DatasetBundle
from .errors import DomainError, ShortcutMismatchError
from .norms import NormsConfig, PersistenceNorms, cloud_norms, fmt_float
from .rips import AUTO
from .stats import PointCloud

SWEEP_HEADER = ("dataset", "kind", "param", "L01", "L02", "L11", "L12")
SHORTCUT_RTOL = 1e-9


class TransformKind(str, enum.Enum):
    SCALE = "scale"
    TRANSLATE = "translate"
    EXPAND_X1 = "expand"

    @classmethod
    def parse(cls, value: "str | TransformKind") -> "TransformKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise DomainError(f"unknown transform {value!r}; use scale, translate or expand") from None


def _grid(start: float, stop: float, step: float) -> tuple[float, ...]:
    count = int(round((stop - start) / step)) + 1
    # built from integer multiples so 0.75 is 0.75, not 0.25 + 0.25 + 0.25
    return tuple(round(start + i * step, 10) for i in range(count))


DEFAULT_GRIDS = {
    TransformKind.SCALE: _grid(0.25, 3.0, 0.25),
    TransformKind.TRANSLATE: _grid(-50.0, 50.0, 10.0),
    TransformKind.EXPAND_X1: _grid(0.25, 3.0, 0.25),
}


@dataclass(frozen=True)
class TransformSpec:
    kind: TransformKind
    grid: tuple[float, ...] = ()

    def __post_init__(self):
        kind = TransformKind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        grid = tuple(float(g) for g in (self.grid or DEFAULT_GRIDS[kind]))
        if not grid:
            raise DomainError("sweep grid is empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise DomainError("sweep grid must be strictly increasing")
        if kind is not TransformKind.TRANSLATE and grid[0] <= 0.0:
            raise DomainError(f"{kind.value} factors must be positive")
        object.__setattr__(self, "grid", grid)


def translate(cloud: PointCloud, dx: float, dy: float = 0.0) -> PointCloud:
    return PointCloud(cloud.label, cloud.points + np.array([dx, dy]))


def apply_transform(cloud: PointCloud, kind: "TransformKind | str", parameter: float) -> PointCloud:
    kind = TransformKind.parse(kind)
    p = float(parameter)
    if kind is TransformKind.TRANSLATE:
        return translate(cloud, p)
    if not p > 0.0:
        raise DomainError(f"{kind.value} factor must be positive, got {parameter}")
    if kind is TransformKind.SCALE:
        return PointCloud(cloud.label, cloud.points * p)
    return PointCloud(cloud.label, cloud.points * np.array([p, 1.0]))


@dataclass(frozen=True)
class SweepRow:
    param: float
    norms: PersistenceNorms


@dataclass(frozen=True)
class SweepResult:
    dataset: str
    kind: TransformKind
    rows: tuple[SweepRow, ...] = field(default_factory=tuple)

    @property
    def params(self) -> list[float]:
        return [r.param for r in self.rows]

    def column(self, name: str) -> list[float]:
        return [getattr(r.norms, name) for r in self.rows]


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= SHORTCUT_RTOL * max(abs(a), abs(b)) + 1e-12


def _shortcut(base: PersistenceNorms, kind: TransformKind, p: float) -> PersistenceNorms:
    return base.scaled(p) if kind is TransformKind.SCALE else base


def _task(args) -> PersistenceNorms:
    cloud, kind, p, config = args
    return cloud_norms(apply_transform(cloud, kind, p), config)


def run_sweep(
    bundle: "DatasetBundle | Iterable[PointCloud]",
    spec: TransformSpec,
    shortcut: bool = True,
    config: NormsConfig = NormsConfig(),
    baseline: "Mapping[str, PersistenceNorms] | None" = None,
) -> list[SweepResult]:
    """One result per dataset, rows in grid order.

    Scaling and translation reuse the untransformed norms (norms scale
    linearly and are translation invariant) when ``shortcut`` is set and the
    max scale is automatic. With ``shortcut=False`` every grid point is
    recomputed and compared with the shortcut value. ``baseline`` may supply
    already computed untransformed norms by label.
    """
    clouds = bundle.clouds() if isinstance(bundle, DatasetBundle) else list(bundle)
    kind = spec.kind
    equivariant = kind is not TransformKind.EXPAND_X1 and config.max_scale in (AUTO, None)
    base = {}
    if equivariant:
        known = baseline or {}
        base = {c.label: known.get(c.label) or cloud_norms(c, config) for c in clouds}

    if equivariant and shortcut:
        computed = {(c.label, p): _shortcut(base[c.label], kind, p) for c in clouds for p in spec.grid}
    else:
        tasks = [(c, kind, p, config) for c in clouds for p in spec.grid]
        if config.jobs > 1:
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                values = list(pool.map(_task, tasks))
        else:
            values = [_task(t) for t in tasks]
        computed = {(t[0].label, t[2]): v for t, v in zip(tasks, values)}
        if equivariant:
            for (label, p), got in computed.items():
                want = _shortcut(base[label], kind, p)
                if not all(map(_close, got.as_tuple(), want.as_tuple())):
                    raise ShortcutMismatchError(
                        f"{label} {kind.value}={p}: recomputed {got.as_tuple()} vs shortcut {want.as_tuple()}"
                    )

    return [
        SweepResult(c.label, kind, tuple(SweepRow(p, computed[c.label, p]) for p in spec.grid))
        for c in clouds
    ]


def crossings(a: Sequence[float], b: Sequence[float]) -> int:
    """Number of sign changes of a - b along a shared grid (touching points ignored)."""
    signs = [math.copysign(1.0, x - y) for x, y in zip(a, b) if x != y]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sweep_csv(results: Sequence[SweepResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for res in results:
        for row in res.rows:
            w.writerow([res.dataset, res.kind.value, fmt_float(row.param)]
                       + [fmt_float(v) for v in row.norms.as_tuple()])
    return buf.getvalue()
