import csv
import math
from pathlib import Path

import numpy as np
import pytest

from persnorm.datasets import FIXTURE_LABELS, gen_normal, load_fixtures
from persnorm.persistence import compute_diagram
from persnorm.stats import PointCloud

DATA = Path(__file__).parent / "data"

# (criterion id, passed, detail) rows appended by test_acceptance
ACCEPTANCE_LOG: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for cid, ok, detail in ACCEPTANCE_LOG:
        terminalreporter.write_line(f"criterion {cid}: {'PASS' if ok else 'FAIL'}  {detail}")


def read_published(name: str) -> list[dict[str, str]]:
    with open(DATA / name, newline="") as fh:
        return list(csv.DictReader(fh))


def rel_close(a: float, b: float, rtol: float, atol: float = 0.0) -> bool:
    return abs(a - b) <= max(rtol * max(abs(a), abs(b)), atol)


@pytest.fixture(scope="session")
def fixtures():
    return load_fixtures()


@pytest.fixture(scope="session")
def normal():
    return gen_normal(42)


@pytest.fixture(scope="session")
def diagrams(fixtures, normal):
    """AUTO-scale diagrams of every fixture plus the seed-42 normal dataset."""
    out = {label: compute_diagram(fixtures[label]) for label in FIXTURE_LABELS}
    out["normal"] = compute_diagram(normal)
    return out


@pytest.fixture
def unit_square():
    return PointCloud("square", [(0, 0), (1, 0), (0, 1), (1, 1)])


def random_cloud(seed: int, n: int, integer_grid: bool = False) -> PointCloud:
    rng = np.random.default_rng(seed)
    if integer_grid:
        # small integer coordinates force many exactly equal distances
        pts = rng.integers(0, 5, size=(n, 2)).astype(float)
    else:
        pts = rng.uniform(-10, 10, size=(n, 2))
    return PointCloud(f"r{seed}", pts)


def circle_points(n: int, r: float, label: str = "circle") -> PointCloud:
    t = 2 * math.pi * np.arange(n) / n
    return PointCloud(label, np.column_stack([r * np.cos(t), r * np.sin(t)]))
