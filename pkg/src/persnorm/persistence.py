"""Dimension-0 and dimension-1 persistence of a Rips filtration.

H0 comes from union-find over the sorted edges. H1 comes from reducing the
triangle boundary columns only: edges merged by union-find are never pivots,
so the reduction can stop as soon as every remaining edge has been paired.
:func:`naive_reduction_oracle` reduces the full boundary matrix with no
shortcuts and exists to check the fast path.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._reduce import reduce_triangle_columns
from .errors import OracleSizeError
from .rips import AUTO, DEFAULT_TRIANGLE_BUDGET, FilteredComplex, MaxScale, build_rips
from .stats import PointCloud

ESSENTIAL = math.inf
ORACLE_MAX_POINTS = 64


@dataclass(frozen=True)
class PersistencePair:
    """One feature. ``death`` is ``math.inf`` for an essential class.

    ``creator``/``destroyer`` are the vertex tuples of the simplices that
    create and kill the feature (diagnostics only).
    """

    dim: int
    birth: float
    death: float
    creator: tuple[int, ...] = ()
    destroyer: tuple[int, ...] | None = None

    @property
    def essential(self) -> bool:
        return math.isinf(self.death)

    @property
    def lifetime(self) -> float:
        return self.death - self.birth

    @property
    def zero_persistence(self) -> bool:
        return self.death == self.birth

    def key(self) -> tuple[int, float, float]:
        return (self.dim, self.birth, self.death)


@dataclass(frozen=True)
class PersistenceDiagram:
    pairs: tuple[PersistencePair, ...]
    max_scale: float
    n_points: int

    def in_dim(self, dim: int) -> list[PersistencePair]:
        return [p for p in self.pairs if p.dim == dim]

    def finite(self, dim: int) -> list[PersistencePair]:
        return [p for p in self.pairs if p.dim == dim and not p.essential]

    def essential(self, dim: int) -> list[PersistencePair]:
        return [p for p in self.pairs if p.dim == dim and p.essential]

    def lifetimes(self, dim: int) -> np.ndarray:
        """Finite lifetimes of dimension ``dim`` in pair order."""
        return np.array([p.death - p.birth for p in self.finite(dim)], dtype=np.float64)

    def multiset(self) -> Counter:
        return Counter(p.key() for p in self.pairs)

    def sorted_keys(self) -> list[tuple[int, float, float]]:
        return sorted(p.key() for p in self.pairs)


def _union_find_h0(cx: FilteredComplex) -> tuple[list[PersistencePair], np.ndarray]:
    """Elder-rule merges; returns the pairs and a mask of edges that merged components."""
    parent = list(range(cx.n_points))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merged = np.zeros(cx.n_edges, dtype=bool)
    pairs: list[PersistencePair] = []
    remaining = cx.n_points
    for k, (a, b) in enumerate(cx.edges.tolist()):
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        # every birth is 0, so which root dies is arbitrary; the larger index does
        young, old = (ra, rb) if ra > rb else (rb, ra)
        parent[young] = old
        merged[k] = True
        pairs.append(PersistencePair(0, 0.0, float(cx.edge_values[k]), (young,), (a, b)))
        remaining -= 1
        if remaining == 1:
            break
    roots = sorted({find(v) for v in range(cx.n_points)})
    pairs.extend(PersistencePair(0, 0.0, ESSENTIAL, (r,), None) for r in roots)
    return pairs, merged


def compute_h0(cx: FilteredComplex) -> list[PersistencePair]:
    return _union_find_h0(cx)[0]


def _h1_from_mask(cx: FilteredComplex, merged: np.ndarray) -> list[PersistencePair]:
    n_positive = int(cx.n_edges - merged.sum())
    pair_edge, pair_tri = reduce_triangle_columns(
        cx.triangle_boundary, cx.n_edges, n_positive
    )
    edges, ev = cx.edges, cx.edge_values
    tris, tv = cx.triangles, cx.triangle_values
    pairs = [
        PersistencePair(
            1,
            float(ev[e]),
            float(tv[t]),
            (int(edges[e, 0]), int(edges[e, 1])),
            (int(tris[t, 0]), int(tris[t, 1]), int(tris[t, 2])),
        )
        for e, t in zip(pair_edge.tolist(), pair_tri.tolist())
    ]
    killed = np.zeros(cx.n_edges, dtype=bool)
    killed[pair_edge] = True
    for e in np.flatnonzero(~merged & ~killed).tolist():
        pairs.append(
            PersistencePair(1, float(ev[e]), ESSENTIAL, (int(edges[e, 0]), int(edges[e, 1])), None)
        )
    return pairs


def compute_h1(cx: FilteredComplex) -> list[PersistencePair]:
    _, merged = _union_find_h0(cx)
    return _h1_from_mask(cx, merged)


def diagram_of_complex(cx: FilteredComplex) -> PersistenceDiagram:
    h0, merged = _union_find_h0(cx)
    h1 = _h1_from_mask(cx, merged)
    return PersistenceDiagram(tuple(h0 + h1), cx.max_scale, cx.n_points)


def compute_diagram(
    cloud: PointCloud,
    max_scale: MaxScale = AUTO,
    triangle_budget: int = DEFAULT_TRIANGLE_BUDGET,
) -> PersistenceDiagram:
    return diagram_of_complex(build_rips(cloud, max_scale, triangle_budget))


def naive_reduction_oracle(cx: FilteredComplex) -> PersistenceDiagram:
    """Textbook reduction of the full boundary matrix (all simplices, dims 0-2).

    Columns are Python integers used as bitsets over the global simplex order.
    """
    if cx.n_points > ORACLE_MAX_POINTS:
        raise OracleSizeError(
            f"oracle handles at most {ORACLE_MAX_POINTS} points, got {cx.n_points}"
        )
    simplices = cx.simplices()
    index = {s.vertices: i for i, s in enumerate(simplices)}
    columns: list[int] = []
    for s in simplices:
        col = 0
        if s.dim > 0:
            for face in combinations(s.vertices, s.dim):
                col |= 1 << index[face]
        columns.append(col)

    pivot_owner: dict[int, int] = {}
    for j in range(len(columns)):
        col = columns[j]
        while col:
            low = col.bit_length() - 1
            k = pivot_owner.get(low)
            if k is None:
                break
            col ^= columns[k]
        columns[j] = col
        if col:
            pivot_owner[col.bit_length() - 1] = j

    pairs: list[PersistencePair] = []
    for low, j in sorted(pivot_owner.items()):
        s, t = simplices[low], simplices[j]
        if s.dim <= 1:
            pairs.append(PersistencePair(s.dim, s.value, t.value, s.vertices, t.vertices))
    paired = set(pivot_owner) | set(pivot_owner.values())
    for i, s in enumerate(simplices):
        if s.dim <= 1 and i not in paired:
            pairs.append(PersistencePair(s.dim, s.value, ESSENTIAL, s.vertices, None))
    return PersistenceDiagram(tuple(pairs), cx.max_scale, cx.n_points)
