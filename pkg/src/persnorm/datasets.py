"""Fixture loading, TSV round-tripping and the moment-matched Normal dataset."""

from __future__ import annotations

import math
import warnings
from collections.abc import Mapping
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import (
    DegenerateSampleError,
    EmptyBundleError,
    MissingInputError,
    ParseError,
)
from .rng import XorShift64Star
from .stats import PointCloud, pearson, sample_sd

FIXTURE_LABELS = (
    "dino", "away", "bullseye", "circle", "dots", "h_lines", "high_lines",
    "slant_down", "slant_up", "star", "v_lines", "wide_lines", "x_shape",
)
NORMAL_LABEL = "normal"
KNOWN_LABELS = frozenset(FIXTURE_LABELS) | {NORMAL_LABEL}
FIXTURE_SIZE = 142
TSV_HEADER = ("dataset", "x", "y")


class UnknownLabelWarning(UserWarning):
    pass


class DatasetBundle(Mapping):
    """Ordered, read-only mapping of label -> :class:`PointCloud`."""

    def __init__(self, clouds: Iterable[PointCloud] = ()):
        self._clouds: dict[str, PointCloud] = {}
        for c in clouds:
            if c.label in self._clouds:
                raise ValueError(f"duplicate dataset label {c.label!r}")
            self._clouds[c.label] = c

    def __getitem__(self, label: str) -> PointCloud:
        return self._clouds[label]

    def __iter__(self) -> Iterator[str]:
        return iter(self._clouds)

    def __len__(self) -> int:
        return len(self._clouds)

    def __repr__(self) -> str:
        return f"DatasetBundle({list(self._clouds)})"

    @property
    def labels(self) -> list[str]:
        return list(self._clouds)

    def clouds(self) -> list[PointCloud]:
        return list(self._clouds.values())

    def with_cloud(self, cloud: PointCloud) -> "DatasetBundle":
        """Copy with ``cloud`` appended (or replacing the same label in place)."""
        items = dict(self._clouds)
        items[cloud.label] = cloud
        return DatasetBundle(items.values())

    def subset(self, labels: Iterable[str]) -> "DatasetBundle":
        return DatasetBundle(self._clouds[l] for l in labels)


def fixture_path() -> Path:
    return Path(str(resources.files("persnorm") / "data" / "datasaurus.tsv"))


def load_fixtures() -> DatasetBundle:
    return load_tsv(fixture_path())


def load_tsv(path: "str | Path", dataset_filter: "str | Iterable[str] | None" = None) -> DatasetBundle:
    """Read a ``dataset<TAB>x<TAB>y`` file, grouping rows by label in file order.

    ``dataset_filter`` restricts the result to one label or a collection of labels.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingInputError(f"no such file: {path}")
    wanted = None
    if dataset_filter is not None:
        wanted = {dataset_filter} if isinstance(dataset_filter, str) else set(dataset_filter)

    rows: dict[str, tuple[list[float], list[float]]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        header = fh.readline().rstrip("\r\n")
        if not header:
            raise EmptyBundleError(f"{path} is empty")
        if tuple(header.split("\t")) != TSV_HEADER:
            raise ParseError(f"expected header {'<TAB>'.join(TSV_HEADER)!r}", line=1, path=path)
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ParseError(f"expected 3 tab-separated fields, got {len(fields)}", line=lineno, path=path)
            label = fields[0]
            if wanted is not None and label not in wanted:
                continue
            try:
                x, y = float(fields[1]), float(fields[2])
            except ValueError:
                raise ParseError(f"non-numeric coordinate in {line!r}", line=lineno, path=path) from None
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ParseError(f"non-finite coordinate in {line!r}", line=lineno, path=path)
            xs, ys = rows.setdefault(label, ([], []))
            xs.append(x)
            ys.append(y)

    if wanted is not None:
        missing = sorted(wanted - rows.keys())
        if missing:
            raise EmptyBundleError(f"{path} has no rows for {', '.join(missing)}")
    if not rows:
        raise EmptyBundleError(f"{path} contains no data rows")
    for label in rows:
        if label not in KNOWN_LABELS:
            warnings.warn(f"unknown dataset label {label!r} in {path}", UnknownLabelWarning, stacklevel=2)
    return DatasetBundle(PointCloud.from_xy(label, xs, ys) for label, (xs, ys) in rows.items())


def tsv_text(bundle: Iterable[PointCloud] | DatasetBundle) -> str:
    clouds = bundle.clouds() if isinstance(bundle, DatasetBundle) else list(bundle)
    lines = ["\t".join(TSV_HEADER)]
    for c in clouds:
        lines.extend(f"{c.label}\t{x!r}\t{y!r}" for x, y in c.points.tolist())
    return "\n".join(lines) + "\n"


def write_tsv(bundle: Iterable[PointCloud] | DatasetBundle, path: "str | Path") -> None:
    Path(path).write_text(tsv_text(bundle), encoding="utf-8")


@dataclass(frozen=True)
class MomentTargets:
    mean1: float = 54.27
    mean2: float = 47.84
    sd1: float = 16.77
    sd2: float = 26.94
    rho: float = -0.064


SHARED_TARGETS = MomentTargets()
SHARED_TOLERANCES = MomentTargets(0.01, 0.01, 0.01, 0.01, 0.006)
_MAX_DRAWS = 8


def _whiten(z: np.ndarray) -> np.ndarray | None:
    zc = z - z.mean(axis=0)
    cov = zc.T @ zc / (len(z) - 1)
    w, v = np.linalg.eigh(cov)
    if w[0] <= 1e-12 * max(w[-1], 1e-300):
        return None
    inv_sqrt = v @ np.diag(1.0 / np.sqrt(w)) @ v.T
    out = zc @ inv_sqrt
    # remove the tiny residual mean left by rounding
    return out - out.mean(axis=0)


def gen_normal(
    seed: int = 42,
    n: int = FIXTURE_SIZE,
    targets: MomentTargets = SHARED_TARGETS,
    label: str = NORMAL_LABEL,
) -> PointCloud:
    """Bivariate normal sample whose sample moments equal ``targets`` exactly.

    2n standard normals come from ``XorShift64Star(seed)`` (first n for X1, the
    rest for X2). The sample is centred and whitened, then mapped through the
    Cholesky factor of the target correlation, scaled and shifted. A singular
    draw is retried with seed + 1, seed + 2, ...
    """
    if n < 3:
        raise DegenerateSampleError("need at least 3 points to match two moments and a correlation")
    if not -1.0 < targets.rho < 1.0:
        raise DegenerateSampleError(f"target correlation must lie in (-1, 1), got {targets.rho}")
    for attempt in range(_MAX_DRAWS):
        z = np.array(XorShift64Star(seed + attempt).normals(2 * n), dtype=np.float64)
        white = _whiten(np.column_stack([z[:n], z[n:]]))
        if white is not None:
            break
    else:
        raise DegenerateSampleError(f"{_MAX_DRAWS} draws from seed {seed} were all singular")
    rho = targets.rho
    chol = np.array([[1.0, 0.0], [rho, math.sqrt(1.0 - rho * rho)]])
    y = white @ chol.T
    pts = y * np.array([targets.sd1, targets.sd2]) + np.array([targets.mean1, targets.mean2])
    return PointCloud(label, pts)


def shared_moments(cloud: PointCloud) -> MomentTargets:
    xs, ys = cloud.x1.tolist(), cloud.x2.tolist()
    return MomentTargets(
        math.fsum(xs) / len(xs), math.fsum(ys) / len(ys), sample_sd(xs), sample_sd(ys), pearson(cloud)
    )


def moment_violations(
    cloud: PointCloud,
    targets: MomentTargets = SHARED_TARGETS,
    tolerances: MomentTargets = SHARED_TOLERANCES,
) -> list[str]:
    """Names of the moments outside tolerance, empty when the contract holds."""
    got = shared_moments(cloud)
    out = []
    for name in ("mean1", "mean2", "sd1", "sd2", "rho"):
        if abs(getattr(got, name) - getattr(targets, name)) > getattr(tolerances, name):
            out.append(f"{name}={getattr(got, name):.4f}")
    return out


def default_bundle(normal_seed: int = 42) -> DatasetBundle:
    """Bundled fixtures plus the generated Normal dataset."""
    return load_fixtures().with_cloud(gen_normal(normal_seed))
