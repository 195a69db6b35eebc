"""Deterministic standalone SVG renderings.

Coordinates are printed with a fixed number of decimals, so equal inputs
always give byte-identical files.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np
from scipy.signal import find_peaks

from .bootstrap import ConfidenceBand
from .persistence import PersistenceDiagram
from .stats import PointCloud
from .transforms import SweepResult

DEFAULT_BINS = 20


class RenderKind(str, enum.Enum):
    SCATTER = "scatter"
    DIAGRAM = "diagram"
    SWEEP = "sweep"
    HISTOGRAM = "histogram"


@dataclass(frozen=True)
class RenderSpec:
    kind: RenderKind
    width: int = 480
    height: int = 480
    margin: int = 48


def _f(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [round(k * step, 10) for k in range(first, last + 1)]


class _Canvas:
    def __init__(self, spec: RenderSpec, xlim, ylim, title: str):
        self.spec = spec
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        self.parts: list[str] = []
        self.title = title

    def px(self, x: float) -> float:
        s = self.spec
        return s.margin + (x - self.x0) / (self.x1 - self.x0) * (s.width - 2 * s.margin)

    def py(self, y: float) -> float:
        s = self.spec
        return s.height - s.margin - (y - self.y0) / (self.y1 - self.y0) * (s.height - 2 * s.margin)

    def add(self, element: str) -> None:
        self.parts.append(element)

    def axes(self, xlabel: str, ylabel: str) -> None:
        s = self.spec
        left, right = s.margin, s.width - s.margin
        top, bottom = s.margin, s.height - s.margin
        self.add(f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" '
                 f'fill="none" stroke="#444" stroke-width="1"/>')
        for t in _nice_ticks(self.x0, self.x1):
            x = _f(self.px(t))
            self.add(f'<line x1="{x}" y1="{bottom}" x2="{x}" y2="{bottom + 4}" stroke="#444"/>')
            self.add(f'<text x="{x}" y="{bottom + 16}" font-size="10" text-anchor="middle">{_f(t)}</text>')
        for t in _nice_ticks(self.y0, self.y1):
            y = _f(self.py(t))
            self.add(f'<line x1="{left - 4}" y1="{y}" x2="{left}" y2="{y}" stroke="#444"/>')
            self.add(f'<text x="{left - 6}" y="{y}" font-size="10" text-anchor="end" '
                     f'dominant-baseline="middle">{_f(t)}</text>')
        self.add(f'<text x="{(left + right) // 2}" y="{s.height - 10}" font-size="12" '
                 f'text-anchor="middle">{escape(xlabel)}</text>')
        self.add(f'<text x="14" y="{(top + bottom) // 2}" font-size="12" text-anchor="middle" '
                 f'transform="rotate(-90 14 {(top + bottom) // 2})">{escape(ylabel)}</text>')

    def render(self) -> str:
        s = self.spec
        head = (
            '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{s.width}" '
            f'height="{s.height}" viewBox="0 0 {s.width} {s.height}">\n'
            f'<title>{escape(self.title)}</title>\n'
            f'<rect width="{s.width}" height="{s.height}" fill="white"/>\n'
            f'<text x="{s.width // 2}" y="{s.margin // 2 + 4}" font-size="14" '
            f'text-anchor="middle">{escape(self.title)}</text>\n'
        )
        return head + "\n".join(self.parts) + "\n</svg>\n"


def _padded(lo: float, hi: float, frac: float = 0.05) -> tuple[float, float]:
    if hi <= lo:
        return lo - 0.5, hi + 0.5
    pad = (hi - lo) * frac
    return lo - pad, hi + pad


def render_scatter(cloud: PointCloud, spec: RenderSpec = RenderSpec(RenderKind.SCATTER)) -> str:
    xs, ys = cloud.x1, cloud.x2
    c = _Canvas(spec, _padded(xs.min(), xs.max()), _padded(ys.min(), ys.max()), cloud.label)
    c.axes("X1", "X2")
    for x, y in zip(xs.tolist(), ys.tolist()):
        c.add(f'<circle cx="{_f(c.px(x))}" cy="{_f(c.py(y))}" r="2.5" fill="black"/>')
    return c.render()


def _triangle(cx: float, cy: float, r: float = 4.0) -> str:
    pts = f"{_f(cx)},{_f(cy - r)} {_f(cx - r)},{_f(cy + r * 0.8)} {_f(cx + r)},{_f(cy + r * 0.8)}"
    return f'<polygon points="{pts}" fill="red"/>'


def render_diagram(
    diagram: PersistenceDiagram,
    band: ConfidenceBand | None = None,
    title: str = "",
    show_zero_persistence: bool = False,
    spec: RenderSpec = RenderSpec(RenderKind.DIAGRAM),
) -> str:
    """Birth on x, death on y; essential features sit on a dashed line at the top."""
    finite = [p for p in diagram.pairs if not p.essential]
    top = max([p.death for p in finite] + [diagram.max_scale or 0.0, 1e-9])
    lim = (0.0, top * 1.08)
    c = _Canvas(spec, lim, lim, title)
    if band is not None and band.width > 0:
        w = band.width
        pts = [(0.0, 0.0), (lim[1], lim[1]), (lim[1], min(lim[1] + w, lim[1])), (0.0, min(w, lim[1]))]
        poly = " ".join(f"{_f(c.px(x))},{_f(c.py(y))}" for x, y in pts)
        c.add(f'<polygon points="{poly}" fill="#9ecae1" fill-opacity="0.5" stroke="none"/>')
    c.axes("Birth", "Death")
    c.add(f'<line x1="{_f(c.px(0))}" y1="{_f(c.py(0))}" x2="{_f(c.px(lim[1]))}" '
          f'y2="{_f(c.py(lim[1]))}" stroke="#444" stroke-width="1"/>')
    ess_y = c.py(top * 1.04)
    c.add(f'<line x1="{_f(c.px(0))}" y1="{_f(ess_y)}" x2="{_f(c.px(lim[1]))}" y2="{_f(ess_y)}" '
          f'stroke="#888" stroke-dasharray="4 3"/>')
    # dimension 0 first so loops are drawn on top
    for p in sorted(diagram.pairs, key=lambda q: (q.dim, q.birth, q.death)):
        if p.zero_persistence and not show_zero_persistence:
            continue
        x = c.px(p.birth)
        y = ess_y if p.essential else c.py(p.death)
        if p.dim == 0:
            c.add(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="3" fill="black"/>')
        else:
            c.add(_triangle(x, y))
    return c.render()


def render_sweep(
    results: Sequence[SweepResult],
    column: str = "L01",
    highlight: str = "dino",
    spec: RenderSpec = RenderSpec(RenderKind.SWEEP),
) -> str:
    """One polyline per dataset; the highlighted dataset is black and thicker."""
    params = [p for r in results for p in r.params]
    vals = [v for r in results for v in r.column(column)]
    kind = results[0].kind.value if results else ""
    c = _Canvas(spec, _padded(min(params), max(params), 0.0), _padded(min(vals), max(vals)),
                f"{column} under {kind}")
    c.axes(kind, column)
    ordered = sorted(results, key=lambda r: r.dataset == highlight)
    for r in ordered:
        pts = " ".join(f"{_f(c.px(p))},{_f(c.py(v))}" for p, v in zip(r.params, r.column(column)))
        if r.dataset == highlight:
            style = 'stroke="black" stroke-width="2.5"'
        else:
            style = 'stroke="#999" stroke-width="1"'
        c.add(f'<polyline points="{pts}" fill="none" {style}><title>{escape(r.dataset)}</title></polyline>')
    return c.render()


def histogram_densities(values: Sequence[float], bins: int = DEFAULT_BINS) -> tuple[np.ndarray, np.ndarray]:
    """Bin edges over [min, max] and densities integrating to one.

    Constant data uses the unit interval centred on the value.
    """
    if bins < 2:
        raise ValueError("need at least two bins")
    v = np.asarray(values, dtype=np.float64)
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    dens, edges = np.histogram(v, bins=bins, range=(lo, hi), density=True)
    return edges, dens


def count_modes(densities: Sequence[float], min_prominence: float = 0.5) -> int:
    """Peaks whose prominence is at least ``min_prominence`` times the highest density.

    Runs of equal bins count as one peak, and of two equal peaks only the
    dip between them decides whether both count. The histogram is treated as zero
    outside its range so edge bins can be peaks.
    """
    d = np.asarray(densities, dtype=np.float64)
    if d.size == 0 or d.max() <= 0:
        return 0
    padded = np.concatenate([[0.0], d, [0.0]])
    # equal-height peaks would each get full prominence; a tiny rightward tilt
    # makes the later one the taller so a shallow dip between them is measured
    padded = padded + np.arange(padded.size) * (d.max() * 1e-9)
    peaks, _ = find_peaks(padded, prominence=min_prominence * d.max())
    return int(len(peaks))


def render_histogram(
    cloud: PointCloud,
    axis: int,
    bins: int = DEFAULT_BINS,
    spec: RenderSpec = RenderSpec(RenderKind.HISTOGRAM),
) -> str:
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    values = cloud.points[:, axis - 1]
    edges, dens = histogram_densities(values, bins)
    c = _Canvas(spec, (float(edges[0]), float(edges[-1])), (0.0, float(dens.max()) * 1.1),
                f"{cloud.label} X{axis}")
    c.axes(f"X{axis}", "density")
    for a, b, h in zip(edges[:-1].tolist(), edges[1:].tolist(), dens.tolist()):
        if h <= 0:
            continue
        x, w = c.px(a), c.px(b) - c.px(a)
        y = c.py(h)
        c.add(f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(c.py(0) - y)}" '
              f'fill="#bbb" stroke="#555" stroke-width="0.5"/>')
    return c.render()
