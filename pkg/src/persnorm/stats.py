"""Point clouds and their classical (non-topological) summary statistics.

All sums go through :func:`math.fsum`, which is correctly rounded and therefore
independent of point order: shuffling a cloud leaves every statistic
bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstantAxisError, DegenerateCloudError, NonFiniteError


class PointCloud:
    """A labelled, immutable set of points (one row per point).

    Statistics assume two columns (X1, X2); the topological engine accepts
    any dimension.
    """

    __slots__ = ("label", "points")

    def __init__(self, label: str, points):
        arr = np.array(points, dtype=np.float64, copy=True)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2:
            raise ValueError(f"points must be a 2-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError(f"cloud {label!r} has non-finite coordinates")
        arr.flags.writeable = False
        object.__setattr__(self, "label", str(label))
        object.__setattr__(self, "points", arr)

    def __setattr__(self, name, value):
        raise AttributeError("PointCloud is immutable")

    def __reduce__(self):
        return (PointCloud, (self.label, self.points))

    @classmethod
    def from_xy(cls, label: str, xs: Sequence[float], ys: Sequence[float]) -> "PointCloud":
        if len(xs) != len(ys):
            raise ValueError("xs and ys differ in length")
        return cls(label, np.column_stack([np.asarray(xs, float), np.asarray(ys, float)]).reshape(-1, 2))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def x1(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def x2(self) -> np.ndarray:
        return self.points[:, 1]

    def relabel(self, label: str) -> "PointCloud":
        return PointCloud(label, self.points)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self.label == other.label and np.array_equal(self.points, other.points)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"PointCloud({self.label!r}, n={self.n})"


@dataclass(frozen=True)
class AxisStats:
    mean: float
    sd: float
    min: float
    q25: float
    q50: float
    q75: float
    max: float
    skewness: float
    kurtosis: float


@dataclass(frozen=True)
class SummaryStats:
    """Table-style summary of a 2-D cloud.

    ``sd`` is the sample (n-1) standard deviation; skewness and kurtosis use
    central moments with an n denominator, and kurtosis is not excess.
    """

    label: str
    n: int
    x1: AxisStats
    x2: AxisStats
    pearson_r: float
    max_pair_dist: float

    @property
    def axes(self) -> tuple[AxisStats, AxisStats]:
        return (self.x1, self.x2)


def quantile(values: Iterable[float], p: float) -> float:
    """Linear-interpolation quantile on the sorted sample.

    With order statistics x(1)..x(n) and h = (n-1)p + 1 the result is
    x(floor h) + (h - floor h)(x(floor h + 1) - x(floor h)).
    """
    xs = sorted(float(v) for v in values)
    if not xs:
        raise DegenerateCloudError("quantile of an empty sample")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    h = (len(xs) - 1) * p
    lo = math.floor(h)
    if lo + 1 >= len(xs):
        return xs[-1]
    return xs[lo] + (h - lo) * (xs[lo + 1] - xs[lo])


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs)


def central_moment(xs: Sequence[float], k: int, mean: float | None = None) -> float:
    m = _mean(xs) if mean is None else mean
    return math.fsum((x - m) ** k for x in xs) / len(xs)


def skewness(xs: Sequence[float]) -> float:
    xs = [float(x) for x in xs]
    m = _mean(xs)
    m2 = central_moment(xs, 2, m)
    if m2 == 0.0:
        raise ConstantAxisError("skewness of a constant sample is undefined")
    return central_moment(xs, 3, m) / m2**1.5


def kurtosis(xs: Sequence[float]) -> float:
    """Pearson (non-excess) kurtosis m4 / m2**2."""
    xs = [float(x) for x in xs]
    m = _mean(xs)
    m2 = central_moment(xs, 2, m)
    if m2 == 0.0:
        raise ConstantAxisError("kurtosis of a constant sample is undefined")
    return central_moment(xs, 4, m) / (m2 * m2)


def sample_sd(xs: Sequence[float]) -> float:
    xs = [float(x) for x in xs]
    if len(xs) < 2:
        raise DegenerateCloudError("standard deviation needs at least two values")
    m = _mean(xs)
    return math.sqrt(math.fsum((x - m) ** 2 for x in xs) / (len(xs) - 1))


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation of two equal-length sequences."""
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if len(xs) != len(ys):
        raise ValueError("sequences differ in length")
    if len(xs) < 2:
        raise DegenerateCloudError("correlation needs at least two observations")
    mx, my = _mean(xs), _mean(ys)
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0.0 or syy == 0.0:
        raise ConstantAxisError("correlation with a constant sequence is undefined")
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def pearson(cloud: PointCloud) -> float:
    _require_2d(cloud)
    return pearson_r(cloud.x1.tolist(), cloud.x2.tolist())


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    """Dense Euclidean distance matrix; exactly symmetric with a zero diagonal."""
    pts = np.asarray(points, dtype=np.float64)
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    # (a-b)**2 == (b-a)**2 bitwise, so this only guards against einsum reordering
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return d


def max_pair_distance(cloud: PointCloud) -> float:
    if cloud.n < 2:
        raise DegenerateCloudError("max pair distance needs at least two points")
    return float(pairwise_distances(cloud.points).max())


def _axis_stats(values: np.ndarray) -> AxisStats:
    xs = values.tolist()
    return AxisStats(
        mean=_mean(xs),
        sd=sample_sd(xs),
        min=min(xs),
        q25=quantile(xs, 0.25),
        q50=quantile(xs, 0.50),
        q75=quantile(xs, 0.75),
        max=max(xs),
        skewness=skewness(xs),
        kurtosis=kurtosis(xs),
    )


def _require_2d(cloud: PointCloud) -> None:
    if cloud.dim != 2:
        raise ValueError(f"statistics are defined for 2-D clouds, got {cloud.dim}-D")
    if cloud.n < 2:
        raise DegenerateCloudError(f"cloud {cloud.label!r} has {cloud.n} point(s); need at least 2")


def summarize(cloud: PointCloud) -> SummaryStats:
    _require_2d(cloud)
    return SummaryStats(
        label=cloud.label,
        n=cloud.n,
        x1=_axis_stats(cloud.x1),
        x2=_axis_stats(cloud.x2),
        pearson_r=pearson(cloud),
        max_pair_dist=max_pair_distance(cloud),
    )


STATS_HEADER = (
    "dataset", "n",
    "mean1", "sd1", "min1", "q25_1", "q50_1", "q75_1", "max1",
    "mean2", "sd2", "min2", "q25_2", "q50_2", "q75_2", "max2",
    "rho", "Sk1", "Sk2", "Kt1", "Kt2", "dist",
)


def stats_row(s: SummaryStats) -> list[str]:
    def axis(a: AxisStats) -> list[float]:
        return [a.mean, a.sd, a.min, a.q25, a.q50, a.q75, a.max]

    values = axis(s.x1) + axis(s.x2) + [
        s.pearson_r, s.x1.skewness, s.x2.skewness, s.x1.kurtosis, s.x2.kurtosis, s.max_pair_dist,
    ]
    return [s.label, str(s.n)] + [repr(float(v)) for v in values]


def stats_csv(summaries: Iterable[SummaryStats]) -> str:
    lines = [",".join(STATS_HEADER)]
    lines.extend(",".join(stats_row(s)) for s in summaries)
    return "\n".join(lines) + "\n"
