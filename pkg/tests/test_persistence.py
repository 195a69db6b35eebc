import math
from collections import Counter

import numpy as np
import pytest

from conftest import circle_points, random_cloud
from persnorm._reduce import reduce_triangle_columns
from persnorm.errors import OracleSizeError
from persnorm.persistence import (
    _union_find_h0,
    compute_diagram,
    compute_h0,
    compute_h1,
    diagram_of_complex,
    naive_reduction_oracle,
)
from persnorm.rips import AUTO, build_rips, distance_matrix
from persnorm.stats import PointCloud

SQRT2 = math.sqrt(2)


def prim_mst_weight(points) -> float:
    """Dense O(n^2) Prim, written independently of the union-find path."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    best[0] = 0.0
    total = 0.0
    for _ in range(n):
        i = int(np.argmin(np.where(in_tree, np.inf, best)))
        in_tree[i] = True
        total += best[i]
        d = np.hypot(*(pts - pts[i]).T)
        best = np.where(~in_tree & (d < best), d, best)
    return total


def keys(diagram):
    return Counter(p.key() for p in diagram.pairs)


def test_unit_square_diagram(unit_square):
    d = compute_diagram(unit_square)
    assert keys(d) == Counter({
        (0, 0.0, 1.0): 3,
        (0, 0.0, math.inf): 1,
        (1, 1.0, SQRT2): 1,
        (1, SQRT2, SQRT2): 2,
    })
    nonzero = [p.key() for p in d.in_dim(1) if not p.zero_persistence]
    assert nonzero == [(1, 1.0, SQRT2)]


def test_unit_square_oracle_agrees(unit_square):
    cx = build_rips(unit_square)
    assert keys(naive_reduction_oracle(cx)) == keys(diagram_of_complex(cx))


def test_two_points():
    d = compute_diagram(PointCloud("two", [(0, 0), (0, 2.5)]))
    assert keys(d) == Counter({(0, 0.0, 2.5): 1, (0, 0.0, math.inf): 1})


def test_single_point_oracle():
    cx = build_rips(PointCloud("p", [(1, 1)]))
    assert keys(naive_reduction_oracle(cx)) == Counter({(0, 0.0, math.inf): 1})
    assert keys(diagram_of_complex(cx)) == Counter({(0, 0.0, math.inf): 1})


def test_equilateral_triangle():
    s = 2.0
    d = compute_diagram(PointCloud("tri", [(0, 0), (s, 0), (s / 2, s * math.sqrt(3) / 2)]))
    h0 = sorted(p.death for p in d.in_dim(0))
    assert h0[:2] == pytest.approx([s, s], rel=1e-15) and h0[2] == math.inf
    (loop,) = d.in_dim(1)
    assert loop.birth == pytest.approx(s, rel=1e-15)
    assert loop.lifetime <= 1e-15


def test_h0_and_h1_split(unit_square):
    cx = build_rips(unit_square)
    assert len(compute_h0(cx)) == 4
    assert len(compute_h1(cx)) == 3


@pytest.mark.parametrize("seed", range(200))
def test_oracle_equivalence_small_clouds(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(1, 13))
    cloud = random_cloud(seed, n, integer_grid=seed % 3 == 0)
    if seed % 4 == 1 and n > 1:
        scale = float(distance_matrix(cloud).max()) * float(rng.uniform(0.2, 0.9)) or AUTO
    else:
        scale = AUTO
    cx = build_rips(cloud, scale)
    assert keys(diagram_of_complex(cx)) == keys(naive_reduction_oracle(cx))


@pytest.mark.parametrize("seed", range(50))
def test_oracle_equivalence_compute_diagram(seed):
    cloud = random_cloud(5000 + seed, 10)
    assert keys(compute_diagram(cloud)) == keys(naive_reduction_oracle(build_rips(cloud)))


def test_oracle_size_limit():
    with pytest.raises(OracleSizeError):
        naive_reduction_oracle(build_rips(random_cloud(0, 65), triangle_budget=10**6))


def test_oracle_on_truncated_scale_has_essential_loops():
    # four corners of a square, cut below the diagonal: the loop never fills
    cx = build_rips(PointCloud("sq", [(0, 0), (1, 0), (0, 1), (1, 1)]), 1.2)
    want = Counter({(0, 0.0, 1.0): 3, (0, 0.0, math.inf): 1, (1, 1.0, math.inf): 1})
    assert keys(naive_reduction_oracle(cx)) == want
    assert keys(diagram_of_complex(cx)) == want


def test_counts_under_auto_scale(diagrams):
    for label, d in diagrams.items():
        assert len(d.in_dim(0)) == d.n_points, label
        assert len(d.essential(0)) == 1, label
        assert len(d.essential(1)) == 0, label
        assert all(p.birth == 0.0 for p in d.in_dim(0))
        assert all(p.birth <= p.death for p in d.pairs)


def test_mst_identity_on_fixtures(fixtures, diagrams):
    for label, cloud in fixtures.items():
        h0 = math.fsum(diagrams[label].lifetimes(0))
        assert h0 == pytest.approx(prim_mst_weight(cloud.points), rel=1e-9), label


@pytest.mark.parametrize("seed", range(100))
def test_mst_identity_on_random_clouds(seed):
    cloud = random_cloud(777 + seed, 2 + seed % 40)
    h0 = math.fsum(compute_diagram(cloud).lifetimes(0))
    assert h0 == pytest.approx(prim_mst_weight(cloud.points), rel=1e-9)


def test_dino_dimension_zero(diagrams):
    finite = diagrams["dino"].finite(0)
    assert len(finite) == 141
    assert math.fsum(p.lifetime for p in finite) == pytest.approx(485.707, abs=0.001)


def test_circle_dataset_has_one_long_loop(diagrams):
    lifetimes = sorted(diagrams["circle"].lifetimes(1), reverse=True)
    assert lifetimes[0] == pytest.approx(43, abs=1)
    # one feature carries almost all of the L2 mass
    assert lifetimes[0] ** 2 / math.fsum(v * v for v in lifetimes) > 0.95


def test_analytic_circle():
    r, n = 30.0, 200
    d = compute_diagram(circle_points(n, r))
    loops = sorted(d.finite(1), key=lambda p: p.lifetime, reverse=True)
    top = loops[0]
    assert top.death == pytest.approx(math.sqrt(3) * r, rel=0.01)
    assert top.birth == pytest.approx(2 * r * math.sin(math.pi / n), rel=1e-9)
    assert all(p.lifetime < 0.05 * top.lifetime for p in loops[1:])


def test_small_circle_matches_oracle():
    cx = build_rips(circle_points(40, 30.0))
    assert keys(diagram_of_complex(cx)) == keys(naive_reduction_oracle(cx))


def _matched(pair, candidates, eps):
    return any(abs(pair.birth - q.birth) <= eps and abs(pair.death - q.death) <= eps for q in candidates)


@pytest.mark.parametrize("label", ["dino", "circle", "dots"])
def test_stability_under_small_perturbation(fixtures, diagrams, label):
    eta = 0.01
    rng = np.random.default_rng(5)
    angle = rng.uniform(0, 2 * math.pi, fixtures[label].n)
    radius = eta * np.sqrt(rng.uniform(0, 1, fixtures[label].n))
    jitter = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    moved = compute_diagram(PointCloud(label, fixtures[label].points + jitter))
    base = diagrams[label]
    a, b = np.sort(base.lifetimes(0)), np.sort(moved.lifetimes(0))
    assert np.max(np.abs(a - b)) <= 2 * eta
    far = [p for p in base.finite(1) if p.lifetime > 4 * eta]
    assert far
    assert all(_matched(p, moved.finite(1), 2 * eta) for p in far)


def test_isometry_invariance(fixtures, diagrams):
    th = 1.1
    rot = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    moved = compute_diagram(PointCloud("star", fixtures["star"].points @ rot.T + np.array([-40.0, 9.0])))
    a = np.array([(p.dim, p.birth, p.death) for p in diagrams["star"].pairs if not p.essential])
    b = np.array([(p.dim, p.birth, p.death) for p in moved.pairs if not p.essential])
    a, b = a[np.lexsort(a.T[::-1])], b[np.lexsort(b.T[::-1])]
    assert np.allclose(a, b, rtol=1e-9, atol=1e-9)


def test_compiled_and_python_kernels_agree():
    for seed in range(10):
        cx = build_rips(random_cloud(seed, 25, integer_grid=seed % 2 == 0))
        _, merged = _union_find_h0(cx)
        n_pos = int(cx.n_edges - merged.sum())
        jit = reduce_triangle_columns(cx.triangle_boundary, cx.n_edges, n_pos)
        py = reduce_triangle_columns.py_func(cx.triangle_boundary, cx.n_edges, n_pos)
        assert all(np.array_equal(x, y) for x, y in zip(jit, py))
