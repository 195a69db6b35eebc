"""Resampling confidence band for persistence diagrams.

Resample ``b`` (1-based) draws n indices with replacement from
``XorShift64Star(seed + b)`` via ``randbelow(n)``. Its statistic is the
Hausdorff distance between the resample and the original cloud. The band
width is ``multiplier`` times the ceil((1 - alpha) * B)-th smallest statistic.

This is the subsampling variant: Hausdorff distance bounds the bottleneck
distance between the two diagrams from above, so the band is conservative.
It is for plotting only; norms never consult it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCloudError, DomainError
from .persistence import PersistencePair
from .rng import XorShift64Star
from .stats import PointCloud

DEFAULT_ALPHA = 0.05
DEFAULT_RESAMPLES = 100
DEFAULT_BAND_SEED = 7
DEFAULT_MULTIPLIER = 2.0


@dataclass(frozen=True)
class ConfidenceBand:
    alpha: float
    n_resamples: int
    width: float
    seed: int
    multiplier: float = DEFAULT_MULTIPLIER
    thetas: tuple[float, ...] = ()

    def significant(self, pair: PersistencePair) -> bool:
        """True when the feature's lifetime exceeds the band width (essential pairs always do)."""
        return pair.death - pair.birth > self.width

    def count_significant(self, pairs, dim: int | None = None) -> int:
        return sum(1 for p in pairs if (dim is None or p.dim == dim) and self.significant(p))


def hausdorff_distance(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if len(a) == 0 or len(b) == 0:
        raise DegenerateCloudError("Hausdorff distance of an empty set")
    diff = a[:, None, :] - b[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def resample_indices(n: int, seed: int) -> list[int]:
    gen = XorShift64Star(seed)
    return [gen.randbelow(n) for _ in range(n)]


def order_statistic_rank(alpha: float, n_resamples: int) -> int:
    """1-based rank of the empirical (1 - alpha) quantile."""
    # round first so 0.95 * 100 does not become 96 through representation error
    return min(n_resamples, max(1, math.ceil(round((1.0 - alpha) * n_resamples, 9))))


def bootstrap_band(
    cloud: PointCloud,
    alpha: float = DEFAULT_ALPHA,
    n_resamples: int = DEFAULT_RESAMPLES,
    seed: int = DEFAULT_BAND_SEED,
    multiplier: float = DEFAULT_MULTIPLIER,
) -> ConfidenceBand:
    if cloud.n < 2:
        raise DegenerateCloudError("a confidence band needs at least two points")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if n_resamples < 1:
        raise DomainError("need at least one resample")

    pts = cloud.points
    # the resample is a subset of the cloud, so only the cloud-to-resample side can be nonzero;
    # one full distance matrix serves every resample
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    thetas = []
    for b in range(1, n_resamples + 1):
        idx = np.unique(resample_indices(cloud.n, seed + b))
        thetas.append(float(dist[:, idx].min(axis=1).max()))

    k = order_statistic_rank(alpha, n_resamples)
    width = multiplier * sorted(thetas)[k - 1]
    return ConfidenceBand(alpha, n_resamples, width, seed, multiplier, tuple(thetas))
