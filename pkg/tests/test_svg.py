import xml.etree.ElementTree as ET

import numpy as np
import pytest

from persnorm.bootstrap import bootstrap_band
from persnorm.persistence import compute_diagram
from persnorm.stats import PointCloud
from persnorm.svg import (
    count_modes,
    histogram_densities,
    render_diagram,
    render_histogram,
    render_scatter,
    render_sweep,
)
from persnorm.transforms import TransformSpec, run_sweep

NS = "{http://www.w3.org/2000/svg}"


def parse(text):
    return ET.fromstring(text.encode())


def test_scatter_is_wellformed_and_deterministic(fixtures):
    a = render_scatter(fixtures["dino"])
    assert a == render_scatter(fixtures["dino"])
    root = parse(a)
    assert root.tag == NS + "svg"
    assert len(root.findall(NS + "circle")) == 142


def test_diagram_marks(unit_square, diagrams):
    d = compute_diagram(unit_square)
    root = parse(render_diagram(d, title="square"))
    # 4 dim-0 points (three finite + one essential) and the single (1, sqrt 2) loop
    assert len(root.findall(NS + "circle")) == 4
    assert len([p for p in root.findall(NS + "polygon") if p.get("fill") == "red"]) == 1
    shown = parse(render_diagram(d, show_zero_persistence=True))
    assert len([p for p in shown.findall(NS + "polygon") if p.get("fill") == "red"]) == 3

    circle = parse(render_diagram(diagrams["circle"]))
    assert any(p.get("fill") == "red" for p in circle.findall(NS + "polygon"))
    assert all(c.get("fill") == "black" for c in circle.findall(NS + "circle"))


def test_diagram_with_band(fixtures, diagrams):
    band = bootstrap_band(fixtures["dino"], n_resamples=10)
    text = render_diagram(diagrams["dino"], band, title="dino")
    assert text == render_diagram(diagrams["dino"], band, title="dino")
    root = parse(text)
    assert any(p.get("fill") == "#9ecae1" for p in root.findall(NS + "polygon"))


def test_sweep_highlights_dino(fixtures):
    res = run_sweep(fixtures.subset(["star", "dino", "dots"]), TransformSpec("scale", (0.5, 1.0)))
    root = parse(render_sweep(res, "L01"))
    lines = root.findall(NS + "polyline")
    assert len(lines) == 3
    black = [l for l in lines if l.get("stroke") == "black"]
    assert [l.find(NS + "title").text for l in black] == ["dino"]
    # drawn last so it sits on top
    assert lines[-1] is black[0]


def test_densities_integrate_to_one(fixtures):
    edges, dens = histogram_densities(fixtures["star"].x1, 20)
    assert len(edges) == 21
    assert float(np.sum(dens * np.diff(edges))) == pytest.approx(1.0, abs=1e-12)


def test_constant_data_has_one_occupied_bin():
    edges, dens = histogram_densities([3.0] * 10, 20)
    assert (edges[0], edges[-1]) == (2.5, 3.5)
    assert np.count_nonzero(dens) == 1
    root = parse(render_histogram(PointCloud("c", [(3.0, float(i)) for i in range(10)]), 1))
    bars = [r for r in root.findall(NS + "rect") if r.get("fill") == "#bbb"]
    assert len(bars) == 1


def test_count_modes():
    assert count_modes([0, 1, 3, 1, 0]) == 1
    assert count_modes([3, 1, 0, 1, 3]) == 2
    assert count_modes([3, 2.8, 3, 0]) == 1
    assert count_modes([2, 2, 2]) == 1
    assert count_modes([0, 0]) == 0


def test_circle_x2_is_bimodal(fixtures):
    _, dens = histogram_densities(fixtures["circle"].x2)
    assert count_modes(dens) == 2


def test_dino_x1_peak_is_near_the_mean(fixtures):
    x = fixtures["dino"].x1
    edges, dens = histogram_densities(x)
    assert count_modes(dens) == 1
    k = int(np.argmax(dens))
    width = edges[1] - edges[0]
    assert abs((edges[k] + edges[k + 1]) / 2 - x.mean()) <= 2 * width


def test_histogram_axis_check(fixtures):
    with pytest.raises(ValueError):
        render_histogram(fixtures["dino"], 3)
