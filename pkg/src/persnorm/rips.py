"""Vietoris-Rips filtration (vertices, edges, triangles) of a point cloud.

Filtration values follow the distance convention: an edge enters at the
Euclidean distance between its endpoints, a triangle at its longest edge.
Simplices are totally ordered by (value, dim, lexicographic vertices).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import CapacityError, DegenerateCloudError, DomainError
from .stats import PointCloud, pairwise_distances

AUTO = "auto"
DEFAULT_TRIANGLE_BUDGET = 5_000_000

MaxScale = Union[float, str, None]


@dataclass(frozen=True)
class FiltrationSimplex:
    vertices: tuple[int, ...]
    value: float

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def sort_key(self) -> tuple:
        return (self.value, self.dim, self.vertices)


@dataclass(frozen=True, eq=False)
class FilteredComplex:
    """Rips 2-skeleton stored as per-dimension arrays, each already in filtration order.

    ``triangle_boundary[t]`` holds the positions (in ``edges``) of the three
    faces of triangle ``t``, ascending.
    """

    n_points: int
    max_scale: float
    edges: np.ndarray
    edge_values: np.ndarray
    triangles: np.ndarray
    triangle_values: np.ndarray
    triangle_boundary: np.ndarray

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def n_triangles(self) -> int:
        return int(self.triangles.shape[0])

    def __len__(self) -> int:
        return self.n_points + self.n_edges + self.n_triangles

    def simplices(self) -> list[FiltrationSimplex]:
        """Every simplex in the global filtration order (materialises Python objects)."""
        verts = [FiltrationSimplex((i,), 0.0) for i in range(self.n_points)]
        edges = (
            FiltrationSimplex((int(a), int(b)), float(v))
            for (a, b), v in zip(self.edges, self.edge_values)
        )
        tris = (
            FiltrationSimplex((int(a), int(b), int(c)), float(v))
            for (a, b, c), v in zip(self.triangles, self.triangle_values)
        )
        return verts + list(heapq.merge(edges, tris, key=FiltrationSimplex.sort_key))


def distance_matrix(cloud: PointCloud) -> np.ndarray:
    return pairwise_distances(cloud.points)


def resolve_max_scale(distances: np.ndarray, max_scale: MaxScale) -> float:
    if max_scale is None or (isinstance(max_scale, str) and max_scale.lower() == AUTO):
        return float(distances.max()) if distances.size else 0.0
    scale = float(max_scale)
    if not scale > 0.0:
        raise DomainError(f"max_scale must be positive or 'auto', got {max_scale!r}")
    return scale


def _readonly(*arrays: np.ndarray) -> None:
    for a in arrays:
        a.flags.writeable = False


def build_rips(
    cloud: PointCloud,
    max_scale: MaxScale = AUTO,
    triangle_budget: int = DEFAULT_TRIANGLE_BUDGET,
) -> FilteredComplex:
    """Build the Rips complex of ``cloud`` up to ``max_scale`` (inclusive).

    ``AUTO`` resolves to the cloud diameter, giving the complete 2-skeleton.
    Raises :class:`CapacityError` when the triangle count exceeds the budget.
    """
    n = cloud.n
    if n == 0:
        raise DegenerateCloudError("cannot build a complex on an empty cloud")
    dist = distance_matrix(cloud)
    scale = resolve_max_scale(dist, max_scale)

    iu, ju = np.triu_indices(n, 1)
    ev = dist[iu, ju]
    keep = ev <= scale
    iu, ju, ev = iu[keep], ju[keep], ev[keep]
    # triu_indices is lexicographic, so a stable sort by value gives (value, i, j)
    order = np.argsort(ev, kind="stable")
    edges = np.column_stack([iu[order], ju[order]]).astype(np.int64).reshape(-1, 2)
    edge_values = ev[order].astype(np.float64)

    adj = dist <= scale
    np.fill_diagonal(adj, False)
    n_tri = _count_triangles(adj)
    if n_tri > triangle_budget:
        raise CapacityError(
            f"{n_tri} triangles exceed the budget of {triangle_budget} "
            f"(n={n}, max_scale={scale:g})"
        )

    triangles = _enumerate_triangles(adj, n_tri)
    edge_pos = np.full((n, n), -1, dtype=np.int64)
    if len(edges):
        edge_pos[edges[:, 0], edges[:, 1]] = np.arange(len(edges))
        edge_pos[edges[:, 1], edges[:, 0]] = np.arange(len(edges))
    a, b, c = triangles[:, 0], triangles[:, 1], triangles[:, 2]
    boundary = np.column_stack([edge_pos[a, b], edge_pos[a, c], edge_pos[b, c]]).reshape(-1, 3)
    boundary.sort(axis=1)
    tri_values = edge_values[boundary[:, 2]] if n_tri else np.empty(0, np.float64)
    # triangles are generated in lexicographic order; stable sort keeps it within ties
    t_order = np.argsort(tri_values, kind="stable")
    triangles = np.ascontiguousarray(triangles[t_order])
    boundary = np.ascontiguousarray(boundary[t_order])
    tri_values = np.ascontiguousarray(tri_values[t_order])

    _readonly(edges, edge_values, triangles, tri_values, boundary)
    return FilteredComplex(
        n_points=n,
        max_scale=scale,
        edges=edges,
        edge_values=edge_values,
        triangles=triangles,
        triangle_values=tri_values,
        triangle_boundary=boundary,
    )


def _count_triangles(adj: np.ndarray) -> int:
    a = adj.astype(np.float64)
    return int(round(float(((a @ a) * a).sum()))) // 6


def _enumerate_triangles(adj: np.ndarray, count: int) -> np.ndarray:
    n = adj.shape[0]
    out = np.empty((count, 3), dtype=np.int64)
    pos = 0
    for i in range(n - 2):
        nbr_i = adj[i]
        for j in np.flatnonzero(nbr_i[i + 1 :]) + i + 1:
            ks = np.flatnonzero(nbr_i[j + 1 :] & adj[j, j + 1 :]) + j + 1
            m = ks.size
            if m:
                out[pos : pos + m, 0] = i
                out[pos : pos + m, 1] = j
                out[pos : pos + m, 2] = ks
                pos += m
    assert pos == count
    return out
